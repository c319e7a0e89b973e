#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwt/core/error.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

namespace detail {

class TermReader {
 public:
  explicit TermReader(std::string_view src) : s_(src) {}

  OpenTerm read() {
    OpenTerm t = term();
    skip();
    if (i_ != s_.size()) error("trailing input");
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::InvalidArgument, "term literal, offset " + std::to_string(i_) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  std::size_t number() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) error("expected a number");
    return std::stoul(std::string(s_.substr(start, i_ - start)));
  }

  // Operator names may carry a bracketed parameter list, e.g. `perm[a,s01]`.
  std::string name() {
    skip();
    std::size_t start = i_;
    auto word = [&](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i_ < s_.size() && word(s_[i_])) ++i_;
    if (start == i_) error("expected an operator name");
    if (i_ < s_.size() && s_[i_] == '[') {
      int depth = 0;
      do {
        if (s_[i_] == '[') ++depth;
        if (s_[i_] == ']') --depth;
        ++i_;
      } while (i_ < s_.size() && depth > 0);
      if (depth != 0) error("unclosed '['");
    }
    std::string out;
    for (char c : s_.substr(start, i_ - start))
      if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
  }

  OpenTerm term() {
    if (eat('$')) return OpenTerm::var(static_cast<VarIndex>(number()));
    std::string op = name();
    if (eat('(')) {
      std::vector<OpenTerm> items;
      if (!eat(')')) {
        do items.push_back(term());
        while (eat(','));
        expect(')');
      }
      return OpenTerm::node(std::move(op), BranchMap<OpenTerm>::finite(std::move(items)));
    }
    if (eat('{')) {
      std::vector<std::pair<std::size_t, OpenTerm>> table;
      for (;;) {
        if (eat('_')) {
          expect(':');
          OpenTerm d = term();
          expect('}');
          return OpenTerm::node(std::move(op), BranchMap<OpenTerm>::omega(std::move(table), std::move(d)));
        }
        std::size_t k = number();
        expect(':');
        table.emplace_back(k, term());
        expect(',');
      }
    }
    return OpenTerm::constant(std::move(op));
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Reads the raw syntax produced by show(): `op`, `op(t, u)`,
/// `op{0: t, _: d}` and `$n` for variables.
inline OpenTerm read_term(std::string_view src) { return detail::TermReader(src).read(); }

}  // namespace qwt
