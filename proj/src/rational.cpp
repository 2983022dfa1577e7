// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/rational.hpp"

#include <cctype>

#include "rrcheck/error.hpp"

namespace rrc {

using boost::multiprecision::cpp_int;

namespace {

bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      return false;
  return true;
}

// cpp_int reads a leading 0 as an octal prefix, so strip leading zeros.
cpp_int decimal_digits(std::string_view digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos)
    return 0;
  return cpp_int{std::string(digits.substr(first))};
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw Error("malformed number " + std::string(text));
    cpp_int d = decimal_digits(den);
    if (d == 0)
      throw Error("zero denominator in " + std::string(text));
    value = Rational(decimal_digits(num), d);
  } else {
    auto dot = body.find('.');
    auto whole = body.substr(0, dot);
    auto frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (!all_digits(whole) || (dot != std::string_view::npos && !all_digits(frac)))
      throw Error("malformed number " + std::string(text));
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i)
      scale *= 10;
    value = Rational(decimal_digits(std::string(whole) + std::string(frac)), scale);
  }
  return negative ? Rational(-value) : value;
}

std::string to_decimal_string(const Rational& value) {
  cpp_int num = boost::multiprecision::numerator(value);
  cpp_int den = boost::multiprecision::denominator(value);
  cpp_int rest = den;
  unsigned twos = 0;
  unsigned fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1)
    return num.str() + "/" + den.str();

  unsigned digits = std::max(twos, fives);
  cpp_int scale = 1;
  for (unsigned i = 0; i < digits; ++i)
    scale *= 10;
  cpp_int scaled = num * (scale / den);
  bool negative = scaled < 0;
  if (negative)
    scaled = -scaled;
  std::string text = scaled.str();
  if (digits > 0) {
    if (text.size() <= digits)
      text.insert(0, digits + 1 - text.size(), '0');
    text.insert(text.size() - digits, ".");
  }
  return negative ? "-" + text : text;
}

} // namespace rrc
