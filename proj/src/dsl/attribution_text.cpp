// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/attribution_text.hpp"

namespace rrc::dsl {

namespace {

Rational read_number(TokenStream& in) {
  if (in.peek().kind != TokenKind::Number)
    in.fail("a number");
  return parse_rational(in.next().text);
}

template <typename Fn>
void guarded(const Token& at, Fn&& fn) {
  try {
    fn();
  } catch (const SourceError&) {
    throw;
  } catch (const Error& e) {
    throw SemanticError(at.span, e.what());
  }
}

void read_law(TokenStream& in, quant::AttrLaws& laws) {
  Token which = in.expect_ident("a law name");
  in.expect_punct("=");
  Token choice = in.expect_ident("a law");
  const std::string& w = which.text;
  const std::string& c = choice.text;
  auto bad = [&] { throw SemanticError(choice.span, "unknown law " + c + " for " + w); };
  if (w == "and-cost") {
    if (c == "sum")
      laws.and_cost = quant::AndCostLaw::Sum;
    else if (c == "max")
      laws.and_cost = quant::AndCostLaw::Max;
    else
      bad();
  } else if (w == "or-cost") {
    if (c != "min")
      bad();
    laws.or_cost = quant::OrCostLaw::Min;
  } else if (w == "and-prob") {
    if (c == "product")
      laws.and_prob = quant::AndProbLaw::Product;
    else if (c == "min")
      laws.and_prob = quant::AndProbLaw::Min;
    else
      bad();
  } else if (w == "or-prob") {
    if (c == "max")
      laws.or_prob = quant::OrProbLaw::Max;
    else if (c == "noisy-or")
      laws.or_prob = quant::OrProbLaw::NoisyOr;
    else
      bad();
  } else {
    throw ParseError(which.span, "'and-cost', 'or-cost', 'and-prob' or 'or-prob'", describe(which));
  }
}

} // namespace

AttributionFile parse_attribution(std::string_view text, const StateNaming& naming) {
  AttributionFile out;
  TokenStream in(lex(text), false);
  while (!in.at_end()) {
    if (in.peek().kind == TokenKind::Newline) {
      in.next();
      continue;
    }
    Token kw = in.expect_ident("'cost', 'prob', 'default', 'law' or 'format'");
    if (kw.text == "format") {
      if (in.peek().text != "1")
        in.fail("format version 1");
      in.next();
    } else if (kw.text == "cost" || kw.text == "prob") {
      in.expect_keyword("N");
      AttackSignature sig = read_signature(in, naming);
      in.expect_punct("=");
      Token at = in.peek();
      Rational v = read_number(in);
      guarded(at, [&] {
        if (kw.text == "cost")
          out.attribution.set_cost(sig, v);
        else
          out.attribution.set_prob(sig, v);
      });
    } else if (kw.text == "default") {
      Token which = in.expect_ident("'cost' or 'prob'");
      in.expect_punct("=");
      Token at = in.peek();
      Rational v = read_number(in);
      if (which.text == "cost")
        guarded(at, [&] { out.attribution.set_default_cost(v); });
      else if (which.text == "prob")
        guarded(at, [&] { out.attribution.set_default_prob(v); });
      else
        throw ParseError(which.span, "'cost' or 'prob'", describe(which));
    } else if (kw.text == "law") {
      read_law(in, out.laws);
    } else {
      throw ParseError(kw.span, "'cost', 'prob', 'default', 'law' or 'format'", describe(kw));
    }
    in.expect_line_end();
  }
  return out;
}

} // namespace rrc::dsl
