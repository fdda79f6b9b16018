#include "lexer.hpp"

#include <array>
#include <cctype>

namespace loopdl::detail {

namespace {

constexpr std::array kKeywords = {
    "int",   "boolean", "if",     "else",    "while",  "do",          "for",
    "break", "continue", "return", "throw",  "try",    "catch",       "finally",
    "attempt", "continuation", "halt", "true", "false", "params", "Throwable"};

// Longest first so that "<=" wins over "<".
constexpr std::array kPuncts = {"->", "<=", ">=", "==", "!=", "&&", "||", "(", ")",
                                "{",  "}",  ";",  ",",  ":",  "=",  "<",  ">",
                                "+",  "-",  "*",  "/",  "%",  "!"};

}  // namespace

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      const lang::SourcePos start{line, col};
      const auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) {
        throw ParseError(start.line, start.column, "unterminated comment");
      }
      advance(end + 2 - i);
      continue;
    }
    const lang::SourcePos pos{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      std::string word(text.substr(i, j - i));
      const Tok kind = is_keyword(word) ? Tok::Keyword : Tok::Ident;
      out.push_back({kind, std::move(word), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      const std::string_view ps(p);
      if (text.substr(i, ps.size()) == ps) {
        out.push_back({Tok::Punct, std::string(ps), pos});
        advance(ps.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw ParseError(pos.line, pos.column, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

}  // namespace loopdl::detail
