// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rrcheck/attack_tree.hpp"
#include "rrcheck/dsl/lexer.hpp"
#include "rrcheck/infra_model.hpp"

namespace rrc::dsl {

/// Binds the names written inside `{...}` to states. A name may denote
/// several states (a named predicate); each state has one display name that
/// resolves back to exactly that state.
class StateNaming {
public:
  /// Every state is named by its key.
  static StateNaming from_keys(const TransitionSystem& ts);

  /// Named predicates of `m` denote their state sets; states are displayed
  /// by the first predicate that holds in exactly that one state, else by
  /// their canonical key.
  static StateNaming for_model(const infra::InfraModel& m, const infra::Exploration& x);

  /// Throws SemanticError at `where` for unknown names.
  StateSet resolve(const std::string& name, const SourceSpan& where) const;
  const std::string& display(StateId id) const;
  std::size_t size() const { return display_.size(); }

private:
  std::map<std::string, StateSet, std::less<>> names_;
  std::vector<std::string> display_;
};

/// `{a,b}` with display names, quoted where they are not identifiers.
std::string emit_state_set(const StateSet& s, const StateNaming& naming);

/// Reads a state set written as `{name, ...}` at the current position.
StateSet read_state_set(TokenStream& in, const StateNaming& naming);
AttackSignature read_signature(TokenStream& in, const StateNaming& naming);
std::string emit_signature(const AttackSignature& sig, const StateNaming& naming);

/// Tree syntax:
///
///     N({a},{b})
///     [N({a},{b}), N({b},{c})] AND ({a},{c})
///     [] OR ({a},{a})
AttackTree parse_tree(std::string_view text, const StateNaming& naming);
std::string emit_tree(const AttackTree& tree, const StateNaming& naming);

} // namespace rrc::dsl
