// SPDX-License-Identifier: Apache-2.0
#include "rrcheck/dsl/lexer.hpp"

#include <cctype>

namespace rrc::dsl {

namespace {

std::string position_text(const SourceSpan& span) {
  return std::to_string(span.line) + ":" + std::to_string(span.column);
}

bool letter(unsigned char c) { return std::isalpha(c) || c >= 0x80; }

bool ident_char(unsigned char c) {
  return letter(c) || std::isdigit(c) || c == '-' || c == '_';
}

} // namespace

SourceError::SourceError(SourceSpan span, const std::string& message)
    : Error(position_text(span) + ": " + message), span_(span) {}

ParseError::ParseError(SourceSpan span, std::string expected, std::string found)
    : SourceError(span, "expected " + expected + ", found " + found),
      expected_(std::move(expected)), found_(std::move(found)) {}

bool is_identifier(std::string_view text) {
  if (text.empty() || !letter(static_cast<unsigned char>(text.front())))
    return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (!ident_char(c))
      return false;
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>')
      return false;
  }
  return true;
}

std::string quote_name(std::string_view name) {
  if (is_identifier(name))
    return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string describe(const Token& tok) {
  switch (tok.kind) {
  case TokenKind::End:
    return "end of input";
  case TokenKind::Newline:
    return "end of line";
  case TokenKind::String:
    return "\"" + tok.text + "\"";
  default:
    return "'" + tok.text + "'";
  }
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  auto column_of = [&](std::size_t offset) {
    std::size_t col = 1;
    for (std::size_t k = line_start; k < offset; ++k)
      if ((static_cast<unsigned char>(text[k]) & 0xC0) != 0x80)
        ++col;
    return col;
  };
  auto span = [&](std::size_t begin, std::size_t end) {
    return SourceSpan{line, column_of(begin), begin, end};
  };

  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c == '\n') {
      out.push_back({TokenKind::Newline, "\n", span(i, i + 1)});
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n')
        ++i;
      continue;
    }
    std::size_t start = i;
    if (letter(c)) {
      while (i < text.size() && ident_char(static_cast<unsigned char>(text[i]))) {
        if (text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>')
          break;
        ++i;
      }
      out.push_back({TokenKind::Ident, std::string(text.substr(start, i - start)), span(start, i)});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
      if (i + 1 < text.size() && (text[i] == '.' || text[i] == '/') &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
          ++i;
      }
      out.push_back({TokenKind::Number, std::string(text.substr(start, i - start)), span(start, i)});
      continue;
    }
    if (c == '"') {
      std::string body;
      ++i;
      bool closed = false;
      while (i < text.size() && text[i] != '\n') {
        if (text[i] == '\\' && i + 1 < text.size()) {
          body += text[i + 1];
          i += 2;
          continue;
        }
        if (text[i] == '"') {
          closed = true;
          ++i;
          break;
        }
        body += text[i++];
      }
      if (!closed)
        throw ParseError(span(start, i), "closing '\"'", "end of line");
      out.push_back({TokenKind::String, std::move(body), span(start, i)});
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({TokenKind::Punct, "->", span(i, i + 2)});
      i += 2;
      continue;
    }
    static constexpr std::string_view punct = "{}()[],:=@.";
    if (punct.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({TokenKind::Punct, std::string(1, static_cast<char>(c)), span(i, i + 1)});
      ++i;
      continue;
    }
    throw ParseError(span(i, i + 1), "a token", "'" + std::string(1, static_cast<char>(c)) + "'");
  }
  out.push_back({TokenKind::End, "", span(text.size(), text.size())});
  return out;
}

// TokenStream

TokenStream::TokenStream(std::vector<Token> tokens, bool skip_newlines)
    : tokens_(std::move(tokens)), skip_newlines_(skip_newlines) {
  skip();
}

void TokenStream::skip() {
  if (!skip_newlines_)
    return;
  while (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Newline)
    ++pos_;
}

const Token& TokenStream::peek() const { return tokens_[pos_]; }

Token TokenStream::next() {
  Token t = tokens_[pos_];
  if (t.kind != TokenKind::End)
    ++pos_;
  skip();
  return t;
}

bool TokenStream::at_line_end() const {
  return peek().kind == TokenKind::Newline || peek().kind == TokenKind::End;
}

bool TokenStream::is_punct(std::string_view p) const {
  return peek().kind == TokenKind::Punct && peek().text == p;
}

bool TokenStream::is_keyword(std::string_view word) const {
  return peek().kind == TokenKind::Ident && peek().text == word;
}

bool TokenStream::accept_punct(std::string_view p) {
  if (!is_punct(p))
    return false;
  next();
  return true;
}

bool TokenStream::accept_keyword(std::string_view word) {
  if (!is_keyword(word))
    return false;
  next();
  return true;
}

Token TokenStream::expect_punct(std::string_view p) {
  if (!is_punct(p))
    fail("'" + std::string(p) + "'");
  return next();
}

Token TokenStream::expect_keyword(std::string_view word) {
  if (!is_keyword(word))
    fail("'" + std::string(word) + "'");
  return next();
}

Token TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != TokenKind::Ident)
    fail(what);
  return next();
}

Token TokenStream::expect_name(std::string_view what) {
  if (peek().kind != TokenKind::Ident && peek().kind != TokenKind::String)
    fail(what);
  return next();
}

void TokenStream::expect_line_end() {
  if (!at_line_end())
    fail("end of line");
  if (peek().kind == TokenKind::Newline)
    next();
}

void TokenStream::fail(std::string_view expected) const {
  throw ParseError(peek().span, std::string(expected), describe(peek()));
}

} // namespace rrc::dsl
