#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwt::schema {

/// Source position (1-based). Positions never take part in AST equality.
struct Pos {
  std::size_t line = 0;
  std::size_t col = 0;
  friend bool operator==(const Pos&, const Pos&) { return true; }
};

enum class ErrorKind {
  SyntaxError,
  ScopeError,
  DuplicateConstructor,
  DuplicateBinder,
  PositivityError,
  ConditionalUnsupported,
  NonFinitaryConstant,
  UnsupportedShape,
  NonBijective,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ScopeError: return "ScopeError";
    case ErrorKind::DuplicateConstructor: return "DuplicateConstructor";
    case ErrorKind::DuplicateBinder: return "DuplicateBinder";
    case ErrorKind::PositivityError: return "PositivityError";
    case ErrorKind::ConditionalUnsupported: return "ConditionalUnsupported";
    case ErrorKind::NonFinitaryConstant: return "NonFinitaryConstant";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::NonBijective: return "NonBijective";
  }
  return "?";
}

class SchemaError : public std::runtime_error {
 public:
  SchemaError(ErrorKind kind, Pos pos, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + " at " + std::to_string(pos.line) + ":" +
                           std::to_string(pos.col) + ": " + msg),
        kind_(kind),
        pos_(pos),
        detail_(msg) {}

  ErrorKind kind() const noexcept { return kind_; }
  Pos pos() const noexcept { return pos_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  Pos pos_;
  std::string detail_;
};

[[noreturn]] inline void raise(ErrorKind kind, Pos pos, const std::string& msg) { throw SchemaError(kind, pos, msg); }

/// Point-constructor pattern: an application `head a1 .. an` (a bare name is
/// an application to nothing), a composition `g . f`, or a branch table
/// `{0: t, _: d}`.
struct Pattern {
  enum class Kind { Apply, Compose, Table };
  Kind kind = Kind::Apply;
  std::string head;           // Apply: the name; Compose: the function on the right
  std::vector<Pattern> args;  // Apply: arguments; Compose: the single left operand
  std::vector<std::pair<std::string, Pattern>> table;  // Table: key "_" is the default
  Pos pos;

  static Pattern apply(std::string head, std::vector<Pattern> args, Pos pos = {}) {
    Pattern p;
    p.head = std::move(head);
    p.args = std::move(args);
    p.pos = pos;
    return p;
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Type schemes Phi(Y) of telescope entries.
struct Scheme {
  enum class Kind { Pi, Sigma, Const, Self, Condition };
  Kind kind = Kind::Const;
  std::optional<std::string> binder;  // Pi/Sigma: the bound name, if any
  std::vector<Scheme> parts;          // Pi: {domain, body}; Sigma: {first, second}
  std::string name;                   // Const: type name
  std::vector<std::string> args;      // Const: arguments (earlier binders)
  std::vector<Pattern> sides;         // Condition: {lhs, rhs}
  Pos pos;

  static Scheme constant(std::string name, std::vector<std::string> args = {}, Pos pos = {}) {
    Scheme s;
    s.kind = Kind::Const;
    s.name = std::move(name);
    s.args = std::move(args);
    s.pos = pos;
    return s;
  }
  static Scheme self(Pos pos = {}) {
    Scheme s;
    s.kind = Kind::Self;
    s.pos = pos;
    return s;
  }
  static Scheme pi(std::optional<std::string> binder, Scheme dom, Scheme body, Pos pos = {}) {
    Scheme s;
    s.kind = Kind::Pi;
    s.binder = std::move(binder);
    s.parts = {std::move(dom), std::move(body)};
    s.pos = pos;
    return s;
  }
  static Scheme sigma(std::optional<std::string> binder, Scheme first, Scheme second, Pos pos = {}) {
    Scheme s;
    s.kind = Kind::Sigma;
    s.binder = std::move(binder);
    s.parts = {std::move(first), std::move(second)};
    s.pos = pos;
    return s;
  }
  static Scheme condition(Pattern l, Pattern r, Pos pos = {}) {
    Scheme s;
    s.kind = Kind::Condition;
    s.sides = {std::move(l), std::move(r)};
    s.pos = pos;
    return s;
  }

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Telescope entry (x : Phi); anonymous entries have no binder.
struct Entry {
  std::optional<std::string> binder;
  Scheme type;
  Pos pos;
  friend bool operator==(const Entry&, const Entry&) = default;
};

struct Constructor {
  std::string name;
  std::vector<Entry> telescope;
  /// Set for equality constructors: telescope -> lhs == rhs.
  std::optional<std::pair<Pattern, Pattern>> equation;
  Pos pos;

  bool is_equality() const { return equation.has_value(); }
  friend bool operator==(const Constructor&, const Constructor&) = default;
};

/// `with Name = {a, b}` | `with Name = nat` | `with Name = perms {f = [1, 0]}`
struct Instantiation {
  enum class Kind { Enum, Nat, Perms };
  std::string name;
  Kind kind = Kind::Enum;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> perms;
  Pos pos;
  friend bool operator==(const Instantiation&, const Instantiation&) = default;
};

struct QITDecl {
  std::vector<Instantiation> with;
  std::string name;
  std::vector<std::string> params;  // (X : Set) header parameters
  std::vector<Constructor> constructors;
  Pos pos;

  std::size_t element_count() const {
    std::size_t n = 0;
    for (const auto& c : constructors) n += c.is_equality() ? 0 : 1;
    return n;
  }
  std::size_t equality_count() const { return constructors.size() - element_count(); }

  const Constructor* find(const std::string& ctor) const {
    for (const auto& c : constructors)
      if (c.name == ctor) return &c;
    return nullptr;
  }
  const Instantiation* instantiation(const std::string& type) const {
    for (const auto& w : with)
      if (w.name == type) return &w;
    return nullptr;
  }

  friend bool operator==(const QITDecl&, const QITDecl&) = default;
};

}  // namespace qwt::schema
