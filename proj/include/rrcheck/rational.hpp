// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rrc {

using Rational = boost::multiprecision::cpp_rational;

/// Parses `12`, `0.25`, `-3.5` or `1/3` exactly. Throws rrc::Error otherwise.
Rational parse_rational(std::string_view text);

/// Exact decimal text when the expansion terminates (`0.25`, `5`), else
/// `p/q`.
std::string to_decimal_string(const Rational& value);

} // namespace rrc
