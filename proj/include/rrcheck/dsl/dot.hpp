// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rrcheck/attack_tree.hpp"
#include "rrcheck/dsl/tree_text.hpp"
#include "rrcheck/state_space.hpp"

namespace rrc::dsl {

using EdgeLabels = std::map<std::pair<StateId, StateId>, std::vector<std::string>>;

/// Digraph of the reachable part of `k`: one node per state labelled with
/// `state_label`, initial states drawn bold, edges labelled with the action
/// texts in `edge_labels` (joined by newlines).
std::string emit_dot(const KripkeStructure& k,
                     const std::function<std::string(StateId)>& state_label,
                     const EdgeLabels& edge_labels = {});

/// Digraph of an attack tree: one node per tree node (`N`, `AND` or `OR`
/// plus its signature), child edges in order.
std::string emit_dot(const AttackTree& tree, const StateNaming& naming);

std::string dot_escape(const std::string& text);

} // namespace rrc::dsl
