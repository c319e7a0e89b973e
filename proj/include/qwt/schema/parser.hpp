#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qwt/schema/ast.hpp"
#include "qwt/schema/lexer.hpp"

namespace qwt::schema {

/// Built-in name for the natural numbers; usable without a `with` clause.
inline bool is_builtin_nat(const std::string& name) { return name == "Nat" || name == "ℕ"; }

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)), limit_(toks_.size() - 1) {}

  QITDecl parse_file() {
    QITDecl decl;
    bool have_data = false;
    while (at_end_of_file() == false) {
      const Token& t = toks_[idx_];
      if (!t.line_start) raise(ErrorKind::SyntaxError, t.pos, "expected a new declaration line");
      if (t.kind == Tok::Ident && t.text == "with") {
        with_item(item_end(idx_), decl);
      } else if (t.kind == Tok::Ident && t.text == "data") {
        if (have_data) raise(ErrorKind::SyntaxError, t.pos, "only one data declaration per file");
        have_data = true;
        data_block(decl);
      } else {
        raise(ErrorKind::SyntaxError, t.pos, "expected 'with' or 'data', found '" + t.text + "'");
      }
    }
    if (!have_data) raise(ErrorKind::SyntaxError, toks_.back().pos, "no data declaration");
    return decl;
  }

  /// A standalone pattern (term literal); the whole input must be consumed.
  Pattern parse_pattern_only() {
    Pattern p = pattern();
    if (!at_limit()) raise(ErrorKind::SyntaxError, peek().pos, "unexpected '" + peek().text + "' after term");
    return p;
  }

 private:
  // ----- token access -----
  bool at_end_of_file() const { return toks_[idx_].kind == Tok::End; }
  bool at_limit() const { return idx_ >= limit_; }
  const Token& peek(std::size_t k = 0) const {
    std::size_t j = idx_ + k;
    return j < limit_ ? toks_[j] : toks_[limit_];
  }
  bool is(std::string_view text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return t.kind != Tok::End && idx_ + k < limit_ && t.text == text && t.kind != Tok::Number;
  }
  bool is_punct(std::string_view text, std::size_t k = 0) const {
    return idx_ + k < limit_ && peek(k).kind == Tok::Punct && peek(k).text == text;
  }
  bool is_ident(std::size_t k = 0) const { return idx_ + k < limit_ && peek(k).kind == Tok::Ident; }

  Token take() {
    if (at_limit()) raise(ErrorKind::SyntaxError, peek().pos, "unexpected end of item");
    return toks_[idx_++];
  }
  Token expect_punct(std::string_view text) {
    if (!is_punct(text))
      raise(ErrorKind::SyntaxError, peek().pos,
            "expected '" + std::string(text) + "'" + (at_limit() ? std::string(" before end of item") : ", found '" + peek().text + "'"));
    return take();
  }
  Token expect_ident(const char* what) {
    if (!is_ident()) raise(ErrorKind::SyntaxError, peek().pos, std::string("expected ") + what);
    return take();
  }
  void expect_keyword(std::string_view kw) {
    if (!is_ident() || peek().text != kw) raise(ErrorKind::SyntaxError, peek().pos, "expected '" + std::string(kw) + "'");
    take();
  }

  /// An item runs until the next line that starts at or left of its column.
  std::size_t item_end(std::size_t start) const {
    std::size_t col = toks_[start].pos.col;
    std::size_t j = start + 1;
    while (toks_[j].kind != Tok::End && !(toks_[j].line_start && toks_[j].pos.col <= col)) ++j;
    return j;
  }

  void finish_item(std::size_t end) {
    if (idx_ < end) raise(ErrorKind::SyntaxError, toks_[idx_].pos, "unexpected '" + toks_[idx_].text + "'");
    idx_ = end;
    limit_ = toks_.size() - 1;
  }

  // ----- top level -----
  void with_item(std::size_t end, QITDecl& decl) {
    limit_ = end;
    Instantiation w;
    w.pos = take().pos;
    w.name = expect_ident("a type name after 'with'").text;
    expect_punct("=");
    if (is_punct("{")) {
      take();
      w.kind = Instantiation::Kind::Enum;
      while (!is_punct("}")) {
        w.elements.push_back(expect_ident("an element name").text);
        if (!is_punct("}")) expect_punct(",");
      }
      take();
    } else if (is_ident() && peek().text == "nat") {
      take();
      w.kind = Instantiation::Kind::Nat;
    } else if (is_ident() && peek().text == "perms") {
      take();
      w.kind = Instantiation::Kind::Perms;
      expect_punct("{");
      while (!is_punct("}")) {
        std::string name = expect_ident("a permutation name").text;
        expect_punct("=");
        expect_punct("[");
        std::vector<std::size_t> table;
        while (!is_punct("]")) {
          if (peek().kind != Tok::Number) raise(ErrorKind::SyntaxError, peek().pos, "expected an index");
          table.push_back(std::stoul(take().text));
          if (!is_punct("]")) expect_punct(",");
        }
        take();
        w.perms.emplace_back(std::move(name), std::move(table));
        if (!is_punct("}")) expect_punct(",");
      }
      take();
    } else {
      raise(ErrorKind::SyntaxError, peek().pos, "expected '{...}', 'nat' or 'perms {...}'");
    }
    decl.with.push_back(std::move(w));
    finish_item(end);
  }

  void data_block(QITDecl& decl) {
    std::size_t data_col = toks_[idx_].pos.col;
    // Header: data Name (X : Set)* : Set where
    std::size_t header_end = idx_;
    while (toks_[header_end].kind != Tok::End && !(toks_[header_end].kind == Tok::Ident && toks_[header_end].text == "where"))
      ++header_end;
    if (toks_[header_end].kind == Tok::End) raise(ErrorKind::SyntaxError, toks_[idx_].pos, "data header lacks 'where'");
    limit_ = header_end + 1;
    decl.pos = take().pos;
    decl.name = expect_ident("a type name").text;
    while (is_punct("(")) {
      take();
      std::vector<Token> names;
      while (is_ident()) names.push_back(take());
      if (names.empty()) raise(ErrorKind::SyntaxError, peek().pos, "expected a parameter name");
      expect_punct(":");
      expect_keyword("Set");
      expect_punct(")");
      for (const auto& n : names) {
        if (std::find(decl.params.begin(), decl.params.end(), n.text) != decl.params.end())
          raise(ErrorKind::DuplicateBinder, n.pos, "parameter '" + n.text + "' declared twice");
        decl.params.push_back(n.text);
      }
    }
    expect_punct(":");
    expect_keyword("Set");
    expect_keyword("where");
    finish_item(header_end + 1);

    std::size_t ctor_col = 0;
    while (!at_end_of_file() && toks_[idx_].line_start && toks_[idx_].pos.col > data_col) {
      if (ctor_col == 0) ctor_col = toks_[idx_].pos.col;
      if (toks_[idx_].pos.col != ctor_col)
        raise(ErrorKind::SyntaxError, toks_[idx_].pos, "constructor lines must share one indentation");
      std::size_t end = item_end(idx_);
      limit_ = end;
      decl.constructors.push_back(constructor(decl));
      finish_item(end);
    }
  }

  // ----- constructors -----
  bool binder_group_at(std::size_t k) const {
    if (!is_punct("(", k)) return false;
    std::size_t j = k + 1;
    if (!is_ident(j)) return false;
    while (is_ident(j)) ++j;
    return is_punct(":", j);
  }

  /// Index offset of the ')' matching the '(' at offset k.
  std::size_t matching_paren(std::size_t k) const {
    int depth = 0;
    for (std::size_t j = k; idx_ + j < limit_; ++j) {
      if (is_punct("(", j) || is_punct("{", j) || is_punct("[", j)) ++depth;
      if (is_punct(")", j) || is_punct("}", j) || is_punct("]", j))
        if (--depth == 0) return j;
    }
    raise(ErrorKind::SyntaxError, peek(k).pos, "unbalanced parenthesis");
  }

  /// Whether a top-level token with the given text occurs before the limit.
  bool top_level_ahead(std::string_view text) const {
    int depth = 0;
    for (std::size_t j = 0; idx_ + j < limit_; ++j) {
      if (is_punct("(", j) || is_punct("{", j) || is_punct("[", j)) ++depth;
      if (is_punct(")", j) || is_punct("}", j) || is_punct("]", j)) --depth;
      if (depth == 0 && is_punct(text, j)) return true;
    }
    return false;
  }

  Constructor constructor(const QITDecl& decl) {
    Constructor c;
    Token name = expect_ident("a constructor name");
    c.name = name.text;
    c.pos = name.pos;
    expect_punct(":");
    while (true) {
      if (binder_group_at(0) && !is_punct("*", matching_paren(0) + 1)) {
        while (binder_group_at(0)) binder_group(c.telescope, decl);
        expect_punct("->");
        continue;
      }
      if (top_level_ahead("->")) {
        Pos pos = peek().pos;
        Scheme s = scheme(decl, false);
        c.telescope.push_back({std::nullopt, std::move(s), pos});
        expect_punct("->");
        continue;
      }
      break;
    }
    if (top_level_ahead("==")) {
      Pattern l = pattern();
      expect_punct("==");
      Pattern r = pattern();
      c.equation = std::make_pair(std::move(l), std::move(r));
    } else {
      Pos pos = peek().pos;
      Scheme res = scheme(decl, false);
      if (res.kind != Scheme::Kind::Self)
        raise(ErrorKind::SyntaxError, pos, "constructor '" + c.name + "' must end in '" + decl.name + "' or an equation");
    }
    return c;
  }

  void binder_group(std::vector<Entry>& out, const QITDecl& decl) {
    take();  // (
    std::vector<Token> names;
    while (is_ident()) names.push_back(take());
    expect_punct(":");
    Scheme type;
    if (condition_ahead()) {
      Pos pos = peek().pos;
      Pattern l = pattern();
      expect_punct("==");
      Pattern r = pattern();
      type = Scheme::condition(std::move(l), std::move(r), pos);
    } else {
      type = scheme(decl, true);
    }
    expect_punct(")");
    for (const auto& n : names) out.push_back({n.text, type, n.pos});
  }

  /// Whether '==' occurs before the ')' closing the current group.
  bool condition_ahead() const {
    int depth = 0;
    for (std::size_t j = 0; idx_ + j < limit_; ++j) {
      if (is_punct("(", j) || is_punct("{", j) || is_punct("[", j)) ++depth;
      if (is_punct(")", j) || is_punct("}", j) || is_punct("]", j)) {
        if (depth == 0) return false;
        --depth;
      }
      if (depth == 0 && is_punct("==", j)) return true;
    }
    return false;
  }

  // ----- schemes -----
  Scheme scheme(const QITDecl& decl, bool allow_arrow) {
    Pos pos = peek().pos;
    Scheme s = product(decl, allow_arrow);
    if (allow_arrow && is_punct("->")) {
      take();
      return Scheme::pi(std::nullopt, std::move(s), scheme(decl, true), pos);
    }
    return s;
  }

  Scheme product(const QITDecl& decl, bool allow_arrow) {
    Pos pos = peek().pos;
    if (binder_group_at(0)) {
      take();
      std::vector<Token> names;
      while (is_ident()) names.push_back(take());
      expect_punct(":");
      Scheme dom = scheme(decl, true);
      expect_punct(")");
      if (is_punct("*")) {
        take();
        if (names.size() != 1) raise(ErrorKind::SyntaxError, pos, "a dependent pair binds exactly one name");
        return Scheme::sigma(names[0].text, std::move(dom), product(decl, allow_arrow), pos);
      }
      if (allow_arrow && is_punct("->")) {
        take();
        Scheme body = scheme(decl, true);
        for (auto it = names.rbegin(); it != names.rend(); ++it) body = Scheme::pi(it->text, dom, std::move(body), it->pos);
        return body;
      }
      raise(ErrorKind::SyntaxError, peek().pos, "expected '->' or '*' after a binder group");
    }
    Scheme a = atom(decl);
    if (is_punct("*")) {
      take();
      return Scheme::sigma(std::nullopt, std::move(a), product(decl, allow_arrow), pos);
    }
    return a;
  }

  Scheme atom(const QITDecl& decl) {
    if (is_punct("(")) {
      take();
      Scheme s = scheme(decl, true);
      expect_punct(")");
      return s;
    }
    Token head = expect_ident("a type");
    std::vector<Token> args;
    while (is_ident()) args.push_back(take());
    if (head.text == decl.name) {
      bool ok = args.empty() || args.size() == decl.params.size();
      for (std::size_t i = 0; ok && i < args.size(); ++i) ok = args[i].text == decl.params[i];
      if (!ok) raise(ErrorKind::ScopeError, head.pos, "'" + decl.name + "' must be applied to its own parameters");
      return Scheme::self(head.pos);
    }
    std::vector<std::string> names;
    for (const auto& a : args) names.push_back(a.text);
    return Scheme::constant(head.text, std::move(names), head.pos);
  }

  // ----- patterns -----
  Pattern pattern() {
    Pos pos = peek().pos;
    Pattern head = compose();
    if (is_punct("::")) {
      take();
      return Pattern::apply("cons", {std::move(head), pattern()}, pos);
    }
    return head;
  }

  Pattern compose() {
    Pattern p = application();
    while (is_punct(".")) {
      Pos pos = take().pos;
      Pattern c;
      c.kind = Pattern::Kind::Compose;
      c.head = expect_ident("a function name after '.'").text;
      c.args = {std::move(p)};
      c.pos = pos;
      p = std::move(c);
    }
    return p;
  }

  bool atom_start() const { return is_ident() || is_punct("(") || is_punct("[") || is_punct("{"); }

  Pattern application() {
    Pos pos = peek().pos;
    if (!is_ident()) {
      auto group = pattern_atom();
      if (group.size() != 1) raise(ErrorKind::SyntaxError, pos, "argument list without a head");
      return std::move(group[0]);
    }
    Pattern p = Pattern::apply(take().text, {}, pos);
    while (atom_start()) {
      for (auto& a : pattern_atom()) p.args.push_back(std::move(a));
    }
    return p;
  }

  /// One atom, or the comma-separated arguments of a call `f(a, b)`.
  std::vector<Pattern> pattern_atom() {
    Pos pos = peek().pos;
    if (is_ident()) return {Pattern::apply(take().text, {}, pos)};
    if (is_punct("[")) {
      take();
      expect_punct("]");
      return {Pattern::apply("nil", {}, pos)};
    }
    if (is_punct("(")) {
      take();
      std::vector<Pattern> items{pattern()};
      while (is_punct(",")) {
        take();
        items.push_back(pattern());
      }
      expect_punct(")");
      return items;
    }
    if (is_punct("{")) {
      take();
      Pattern t;
      t.kind = Pattern::Kind::Table;
      t.pos = pos;
      while (!is_punct("}")) {
        const Token& k = peek();
        if (k.kind != Tok::Number && k.kind != Tok::Ident) raise(ErrorKind::SyntaxError, k.pos, "expected a table key");
        std::string key = take().text;
        expect_punct(":");
        t.table.emplace_back(std::move(key), pattern());
        if (!is_punct("}")) expect_punct(",");
      }
      take();
      return {std::move(t)};
    }
    raise(ErrorKind::SyntaxError, pos, at_limit() ? "expected a pattern" : "unexpected '" + peek().text + "'");
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
  std::size_t limit_;
};

}  // namespace detail

QITDecl check_scope(QITDecl decl);

/// Parses a declaration file and checks scoping.
inline QITDecl parse_decl(std::string_view source) {
  detail::Parser p(lex(source));
  return check_scope(p.parse_file());
}

/// Parses a single pattern, e.g. a term literal `cons(a, nil)` or `a :: []`.
inline Pattern parse_pattern(std::string_view source) {
  detail::Parser p(lex(source));
  return p.parse_pattern_only();
}

namespace detail {

struct Scope {
  const QITDecl& decl;
  std::set<std::string> types;
  std::set<std::string> elements;
  std::set<std::string> ctors;
};

inline void check_scheme(const Scope& sc, const Scheme& s, std::vector<std::string>& bound);

inline void check_pattern(const Scope& sc, const Pattern& p, const std::vector<std::string>& bound) {
  auto known = [&](const std::string& n) {
    return sc.ctors.count(n) || sc.elements.count(n) || std::find(bound.begin(), bound.end(), n) != bound.end();
  };
  switch (p.kind) {
    case Pattern::Kind::Apply:
      if (!known(p.head)) raise(ErrorKind::ScopeError, p.pos, "'" + p.head + "' is not bound here");
      for (const auto& a : p.args) check_pattern(sc, a, bound);
      break;
    case Pattern::Kind::Compose:
      if (std::find(bound.begin(), bound.end(), p.head) == bound.end())
        raise(ErrorKind::ScopeError, p.pos, "'" + p.head + "' is not a bound function");
      check_pattern(sc, p.args.at(0), bound);
      break;
    case Pattern::Kind::Table:
      for (const auto& [k, v] : p.table) check_pattern(sc, v, bound);
      break;
  }
}

inline void check_scheme(const Scope& sc, const Scheme& s, std::vector<std::string>& bound) {
  switch (s.kind) {
    case Scheme::Kind::Self: return;
    case Scheme::Kind::Const:
      if (!sc.types.count(s.name) && !is_builtin_nat(s.name))
        raise(ErrorKind::ScopeError, s.pos, "unknown type '" + s.name + "'");
      for (const auto& a : s.args)
        if (std::find(bound.begin(), bound.end(), a) == bound.end())
          raise(ErrorKind::ScopeError, s.pos, "'" + a + "' is not bound before its use in '" + s.name + "'");
      return;
    case Scheme::Kind::Pi:
    case Scheme::Kind::Sigma: {
      check_scheme(sc, s.parts[0], bound);
      std::size_t mark = bound.size();
      if (s.binder) bound.push_back(*s.binder);
      check_scheme(sc, s.parts[1], bound);
      bound.resize(mark);
      return;
    }
    case Scheme::Kind::Condition:
      check_pattern(sc, s.sides[0], bound);
      check_pattern(sc, s.sides[1], bound);
      return;
  }
}

}  // namespace detail

/// Rejects unbound names, duplicate binders and duplicate constructors.
inline QITDecl check_scope(QITDecl decl) {
  detail::Scope sc{decl, {}, {}, {}};
  for (const auto& p : decl.params) sc.types.insert(p);
  for (const auto& w : decl.with) {
    if (sc.types.count(w.name) && std::find(decl.params.begin(), decl.params.end(), w.name) == decl.params.end())
      raise(ErrorKind::ScopeError, w.pos, "type '" + w.name + "' instantiated twice");
    sc.types.insert(w.name);
    for (const auto& e : w.elements)
      if (!sc.elements.insert(e).second) raise(ErrorKind::ScopeError, w.pos, "element '" + e + "' declared twice");
    for (const auto& [n, t] : w.perms)
      if (!sc.elements.insert(n).second) raise(ErrorKind::ScopeError, w.pos, "element '" + n + "' declared twice");
  }
  for (const auto& c : decl.constructors) {
    if (!sc.ctors.insert(c.name).second)
      raise(ErrorKind::DuplicateConstructor, c.pos, "constructor '" + c.name + "' declared twice");
    if (sc.elements.count(c.name))
      raise(ErrorKind::ScopeError, c.pos, "constructor '" + c.name + "' clashes with a type element");
  }
  for (const auto& c : decl.constructors) {
    std::vector<std::string> bound;
    for (const auto& e : c.telescope) {
      detail::check_scheme(sc, e.type, bound);
      if (e.binder && *e.binder != "_") {
        if (std::find(bound.begin(), bound.end(), *e.binder) != bound.end())
          raise(ErrorKind::DuplicateBinder, e.pos, "binder '" + *e.binder + "' repeats in the telescope of '" + c.name + "'");
        bound.push_back(*e.binder);
      }
    }
    if (c.equation) {
      detail::check_pattern(sc, c.equation->first, bound);
      detail::check_pattern(sc, c.equation->second, bound);
    }
  }
  return decl;
}

}  // namespace qwt::schema
