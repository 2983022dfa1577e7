// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "rrcheck/infra_model.hpp"

namespace rrc::dsl {

/// Parses the line-oriented `.infra` format:
///
///     format 1
///     credential key
///     location office physical data{doc}
///     edge lobby office
///     actor alice creds{key} role{staff}
///     tipped charlie impersonates{staff}
///     policy office: has(key) or role(staff) -> {move,get}
///     hook on-move alice refresh eph pool{e1,e2}
///     observe shop eph
///     init alice@lobby
///     init alice.eph = e1
///     pred at-office = actor-at(alice, office)
///
/// Names must be declared before use. Throws ParseError / SemanticError.
infra::InfraModel parse_model(std::string_view text);

/// Applies a patch file to `base`. Patches use the model grammar: a
/// declaration of an existing id replaces it, a new id extends the model,
/// policies append. Patches may also `remove edge A B`, `remove policy L`,
/// `remove hook ACTOR KEY`, `remove tipped ACTOR` and `remove observe L KEY`.
infra::InfraModel apply_patch(const infra::InfraModel& base, std::string_view patch);

/// Canonical text; parse_model(emit_model(m)) == m.
std::string emit_model(const infra::InfraModel& m);

std::string emit_condition(const infra::Condition& c);

} // namespace rrc::dsl
