// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "rrcheck/dsl/tree_text.hpp"
#include "rrcheck/quant.hpp"

namespace rrc::dsl {

struct AttributionFile {
  quant::Attribution attribution;
  quant::AttrLaws laws;
};

/// `.attr` files, one entry per line:
///
///     cost N({a},{b}) = 2
///     prob N({a},{b}) = 0.5
///     default cost = 1
///     default prob = 1/2
///     law or-prob = noisy-or      # and-cost: sum|max, and-prob: product|min,
///                                 # or-cost: min, or-prob: max|noisy-or
AttributionFile parse_attribution(std::string_view text, const StateNaming& naming);

} // namespace rrc::dsl
