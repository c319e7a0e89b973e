#pragma once

#include <optional>
#include <string>

#include "qwt/schema/ast.hpp"
#include "qwt/schema/parser.hpp"

namespace qwt::schema {

inline bool mentions_self(const Scheme& s) {
  switch (s.kind) {
    case Scheme::Kind::Self: return true;
    case Scheme::Kind::Const:
    case Scheme::Kind::Condition: return false;
    case Scheme::Kind::Pi:
    case Scheme::Kind::Sigma: return mentions_self(s.parts[0]) || mentions_self(s.parts[1]);
  }
  return false;
}

inline bool has_condition(const Scheme& s) {
  if (s.kind == Scheme::Kind::Condition) return true;
  if (s.kind == Scheme::Kind::Pi || s.kind == Scheme::Kind::Sigma)
    return has_condition(s.parts[0]) || has_condition(s.parts[1]);
  return false;
}

namespace detail {
inline std::optional<Pos> negative_occurrence(const Scheme& s) {
  switch (s.kind) {
    case Scheme::Kind::Pi:
      if (mentions_self(s.parts[0])) return s.parts[0].pos;
      return negative_occurrence(s.parts[1]);
    case Scheme::Kind::Sigma:
      if (auto p = negative_occurrence(s.parts[0])) return p;
      return negative_occurrence(s.parts[1]);
    default: return std::nullopt;
  }
}
}  // namespace detail

/// The self type may occur only in strictly positive positions: never inside
/// the domain of a function type. Throws PositivityError at the offending domain.
inline void check_positivity(const QITDecl& decl) {
  for (const auto& c : decl.constructors)
    for (const auto& e : c.telescope)
      if (auto pos = detail::negative_occurrence(e.type))
        raise(ErrorKind::PositivityError, *pos,
              "'" + decl.name + "' occurs in the domain of a function type in constructor '" + c.name + "'");
}

struct Classification {
  bool recursive = false;
  bool conditional = false;
  bool finitary = true;
  friend bool operator==(const Classification&, const Classification&) = default;
};

namespace detail {
inline bool constant_finite(const QITDecl& decl, const std::string& name) {
  if (is_builtin_nat(name)) return false;
  const Instantiation* w = decl.instantiation(name);
  // Uninstantiated parameters have no known cardinality.
  return w && w->kind == Instantiation::Kind::Enum;
}

inline bool all_constants_finite(const QITDecl& decl, const Scheme& s) {
  switch (s.kind) {
    case Scheme::Kind::Const: return constant_finite(decl, s.name);
    case Scheme::Kind::Pi:
    case Scheme::Kind::Sigma: return all_constants_finite(decl, s.parts[0]) && all_constants_finite(decl, s.parts[1]);
    default: return true;
  }
}
}  // namespace detail

/// recursive: some equality constructor takes an argument of the self type.
/// conditional: some telescope carries an equation l == r.
/// finitary: every constant type used is a finite enumeration.
inline Classification classify(const QITDecl& decl) {
  Classification out;
  for (const auto& c : decl.constructors)
    for (const auto& e : c.telescope) {
      if (c.is_equality() && mentions_self(e.type)) out.recursive = true;
      if (has_condition(e.type)) out.conditional = true;
      if (!detail::all_constants_finite(decl, e.type)) out.finitary = false;
    }
  return out;
}

}  // namespace qwt::schema
