// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rrcheck/error.hpp"

namespace rrc::dsl {

/// 1-based line/column of the first character plus byte offsets [begin, end).
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// An error tied to a location in the input text.
class SourceError : public Error {
public:
  SourceError(SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }

private:
  SourceSpan span_;
};

/// Syntax error: what the parser expected and what it found instead.
class ParseError : public SourceError {
public:
  ParseError(SourceSpan span, std::string expected, std::string found);
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

private:
  std::string expected_;
  std::string found_;
};

/// Well-formed syntax referring to something undeclared, duplicated or
/// otherwise inconsistent.
class SemanticError : public SourceError {
public:
  using SourceError::SourceError;
};

enum class TokenKind { Ident, Number, String, Punct, Newline, End };

struct Token {
  TokenKind kind = TokenKind::End;
  /// Identifier/number/punctuation text; the unescaped body for strings.
  std::string text;
  SourceSpan span;
};

/// Shared tokenizer for every text format. `#` starts a comment that runs to
/// the end of the line. Identifiers start with a letter and continue with
/// letters, digits, `-` and `_` (a `-` directly followed by `>` ends the
/// identifier). Bytes >= 0x80 count as letters so UTF-8 names pass through.
std::vector<Token> lex(std::string_view text);

bool is_identifier(std::string_view text);

/// Identifier as-is, anything else as a double-quoted string literal.
std::string quote_name(std::string_view name);

std::string describe(const Token& tok);

/// Cursor over a token vector.
class TokenStream {
public:
  explicit TokenStream(std::vector<Token> tokens, bool skip_newlines);

  const Token& peek() const;
  Token next();
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool at_line_end() const;

  bool is_punct(std::string_view p) const;
  bool is_keyword(std::string_view word) const;
  bool accept_punct(std::string_view p);
  bool accept_keyword(std::string_view word);

  Token expect_punct(std::string_view p);
  Token expect_keyword(std::string_view word);
  Token expect_ident(std::string_view what);
  /// Identifier or quoted string.
  Token expect_name(std::string_view what);
  void expect_line_end();

  [[noreturn]] void fail(std::string_view expected) const;

private:
  void skip();

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool skip_newlines_;
};

} // namespace rrc::dsl
