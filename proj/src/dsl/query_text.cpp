// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/query_text.hpp"

#include <map>

#include "rrcheck/dsl/lexer.hpp"

namespace rrc::dsl {

using ctl::Formula;
using ctl::Op;

namespace {

const std::map<std::string, Op, std::less<>>& unary_keywords() {
  static const std::map<std::string, Op, std::less<>> table{
      {"not", Op::Not}, {"EX", Op::EX}, {"AX", Op::AX}, {"EF", Op::EF},
      {"AF", Op::AF},   {"EG", Op::EG}, {"AG", Op::AG},
  };
  return table;
}

bool reserved(std::string_view word) {
  return unary_keywords().contains(word) || word == "and" || word == "or" || word == "E" ||
         word == "A" || word == "U" || word == "true" || word == "false";
}

class QueryReader {
public:
  explicit QueryReader(std::string_view text) : in_(lex(text), true) {}

  Formula run() {
    Formula f = implication();
    if (!in_.at_end())
      in_.fail("end of query");
    return f;
  }

private:
  Formula implication() {
    Formula lhs = disjunction();
    if (in_.accept_punct("->"))
      return ctl::implies(std::move(lhs), implication());
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (in_.accept_keyword("or"))
      lhs = ctl::disj(std::move(lhs), conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (in_.accept_keyword("and"))
      lhs = ctl::conj(std::move(lhs), unary());
    return lhs;
  }

  Formula unary() {
    const Token& t = in_.peek();
    if (t.kind == TokenKind::Ident) {
      if (auto it = unary_keywords().find(t.text); it != unary_keywords().end()) {
        in_.next();
        return Formula::unary(it->second, unary());
      }
      if (t.text == "E" || t.text == "A") {
        Op op = t.text == "E" ? Op::EU : Op::AU;
        in_.next();
        in_.expect_punct("[");
        Formula f = implication();
        in_.expect_keyword("U");
        Formula g = implication();
        in_.expect_punct("]");
        return Formula::binary(op, std::move(f), std::move(g));
      }
    }
    if (in_.accept_punct("(")) {
      Formula f = implication();
      in_.expect_punct(")");
      return f;
    }
    return atom();
  }

  Formula atom() {
    if (in_.peek().kind != TokenKind::Ident || in_.is_keyword("and") || in_.is_keyword("or") ||
        in_.is_keyword("U"))
      in_.fail("formula");
    Token head = in_.next();
    if (head.text == "true")
      return Formula::truth();
    if (head.text == "false")
      return Formula::falsity();
    std::vector<std::string> args;
    if (in_.accept_punct("(")) {
      do
        args.push_back(in_.expect_ident("an argument").text);
      while (in_.accept_punct(","));
      in_.expect_punct(")");
    }
    return Formula::atom(head.text, std::move(args));
  }

  TokenStream in_;
};

// Operands that are binary (other than the bracketed until forms) need
// parentheses wherever they appear as an operand.
bool needs_parens(const Formula& f) {
  return f.is_binary() && f.op() != Op::EU && f.op() != Op::AU;
}

std::string operand(const Formula& f) {
  std::string text = emit_query(f);
  return needs_parens(f) ? "(" + text + ")" : text;
}

const char* unary_text(Op op) {
  for (const auto& [word, o] : unary_keywords())
    if (o == op)
      return word.c_str();
  return "?";
}

} // namespace

Formula parse_query(std::string_view text) { return QueryReader(text).run(); }

std::string emit_query(const Formula& f) {
  switch (f.op()) {
  case Op::Atom:
    if (reserved(f.named().name) || !is_identifier(f.named().name))
      throw Error("atom name " + f.named().name + " has no query syntax");
    return f.named().text();
  case Op::Literal:
    throw Error("literal state sets have no query syntax");
  case Op::True:
    return "true";
  case Op::False:
    return "false";
  case Op::And:
    return operand(f.lhs()) + " and " + operand(f.rhs());
  case Op::Or:
    return operand(f.lhs()) + " or " + operand(f.rhs());
  case Op::Implies:
    return operand(f.lhs()) + " -> " + operand(f.rhs());
  case Op::EU:
    return "E[" + emit_query(f.lhs()) + " U " + emit_query(f.rhs()) + "]";
  case Op::AU:
    return "A[" + emit_query(f.lhs()) + " U " + emit_query(f.rhs()) + "]";
  default:
    return std::string(unary_text(f.op())) + " " + operand(f.lhs());
  }
}

} // namespace rrc::dsl
