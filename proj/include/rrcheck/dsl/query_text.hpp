// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "rrcheck/ctl.hpp"

namespace rrc::dsl {

/// CTL query syntax, loosest binding first:
///
///     f -> g                      (right associative)
///     f or g
///     f and g
///     not f | EX f | AX f | EF f | AF f | EG f | AG f
///     E[f U g] | A[f U g] | (f) | true | false | name | name(arg, ...)
ctl::Formula parse_query(std::string_view text);

/// Canonical text; parse_query(emit_query(f)) == f. Literal state sets have
/// no query syntax and are rejected.
std::string emit_query(const ctl::Formula& f);

} // namespace rrc::dsl
