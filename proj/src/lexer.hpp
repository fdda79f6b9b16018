#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "loopdl/ast.hpp"
#include "loopdl/error.hpp"

namespace loopdl::detail {

enum class Tok { Ident, Keyword, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  lang::SourcePos pos;
};

/// Splits program or formula text into tokens. `//` and `/* */` comments are
/// skipped. Throws ParseError on stray characters or unterminated comments.
std::vector<Token> tokenize(std::string_view text);

bool is_keyword(std::string_view word);

/// Cursor over a token vector with the usual peek/expect helpers.
class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const auto i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Tok::Punct || t.kind == Tok::Keyword) && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return next();
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos.line, t.pos.column, message + ", found " + found);
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace loopdl::detail
