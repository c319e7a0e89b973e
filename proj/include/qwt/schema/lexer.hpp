#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "qwt/schema/ast.hpp"

namespace qwt::schema {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Pos pos;
  bool line_start = false;  // first token on its line
};

namespace detail {
// Unicode spellings accepted for ASCII operators.
struct Alias {
  std::string_view utf8;
  std::string_view ascii;
};
inline constexpr Alias kAliases[] = {
    {"→", "->"},  // rightwards arrow
    {"≡", "=="},  // identical to
    {"∘", "."},   // ring operator
    {"×", "*"},   // multiplication sign
};
}  // namespace detail

/// Splits DSL source into tokens. `--` starts a comment running to end of line.
inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  bool at_line_start = true;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        at_line_start = true;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  auto push = [&](Tok kind, std::string text, Pos pos) {
    out.push_back({kind, std::move(text), pos, at_line_start});
    at_line_start = false;
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Pos pos{line, col};
    bool aliased = false;
    for (const auto& a : detail::kAliases)
      if (src.substr(i, a.utf8.size()) == a.utf8) {
        push(Tok::Punct, std::string(a.ascii), pos);
        advance(a.utf8.size());
        aliased = true;
        break;
      }
    if (aliased) continue;

    auto uc = static_cast<unsigned char>(c);
    if (std::isdigit(uc)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::string text(src.substr(i, j - i));
      advance(j - i);
      push(Tok::Number, std::move(text), pos);
      continue;
    }
    if (std::isalpha(uc) || c == '_' || uc >= 0x80) {
      std::size_t j = i;
      while (j < src.size()) {
        auto d = static_cast<unsigned char>(src[j]);
        bool alias_here = false;
        for (const auto& a : detail::kAliases) alias_here = alias_here || src.substr(j, a.utf8.size()) == a.utf8;
        if (alias_here || !(std::isalnum(d) || d == '_' || d == '\'' || d >= 0x80)) break;
        ++j;
      }
      std::string text(src.substr(i, j - i));
      advance(j - i);
      push(Tok::Ident, std::move(text), pos);
      continue;
    }
    for (std::string_view p : {"->", "==", "::"})
      if (src.substr(i, 2) == p) {
        push(Tok::Punct, std::string(p), pos);
        advance(2);
        aliased = true;
        break;
      }
    if (aliased) continue;
    if (std::string_view("(){}[],:=*.").find(c) != std::string_view::npos) {
      push(Tok::Punct, std::string(1, c), pos);
      advance(1);
      continue;
    }
    raise(ErrorKind::SyntaxError, pos, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", Pos{line, col}, true});
  return out;
}

}  // namespace qwt::schema
