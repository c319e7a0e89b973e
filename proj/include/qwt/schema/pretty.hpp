#pragma once

#include <sstream>
#include <string>

#include "qwt/schema/ast.hpp"

namespace qwt::schema {

namespace detail {

inline void print_pattern(std::ostream& os, const Pattern& p) {
  switch (p.kind) {
    case Pattern::Kind::Apply:
      os << p.head;
      if (!p.args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < p.args.size(); ++i) {
          if (i) os << ", ";
          print_pattern(os, p.args[i]);
        }
        os << ')';
      }
      return;
    case Pattern::Kind::Compose:
      os << '(';
      print_pattern(os, p.args.at(0));
      os << " . " << p.head << ')';
      return;
    case Pattern::Kind::Table:
      os << '{';
      for (std::size_t i = 0; i < p.table.size(); ++i) {
        if (i) os << ", ";
        os << p.table[i].first << ": ";
        print_pattern(os, p.table[i].second);
      }
      os << '}';
      return;
  }
}

inline void print_scheme(std::ostream& os, const Scheme& s, const QITDecl& d);

inline void print_self(std::ostream& os, const QITDecl& d) {
  os << d.name;
  for (const auto& p : d.params) os << ' ' << p;
}

/// Operands of '*' and domains of '->' need parentheses unless atomic.
inline void print_operand(std::ostream& os, const Scheme& s, const QITDecl& d) {
  bool atomic = s.kind == Scheme::Kind::Const || s.kind == Scheme::Kind::Self;
  if (!atomic) os << '(';
  print_scheme(os, s, d);
  if (!atomic) os << ')';
}

inline void print_scheme(std::ostream& os, const Scheme& s, const QITDecl& d) {
  switch (s.kind) {
    case Scheme::Kind::Self: print_self(os, d); return;
    case Scheme::Kind::Const:
      os << s.name;
      for (const auto& a : s.args) os << ' ' << a;
      return;
    case Scheme::Kind::Pi:
      if (s.binder) {
        os << '(' << *s.binder << " : ";
        print_scheme(os, s.parts[0], d);
        os << ") -> ";
      } else {
        print_operand(os, s.parts[0], d);
        os << " -> ";
      }
      print_scheme(os, s.parts[1], d);
      return;
    case Scheme::Kind::Sigma:
      if (s.binder) {
        os << '(' << *s.binder << " : ";
        print_scheme(os, s.parts[0], d);
        os << ')';
      } else {
        print_operand(os, s.parts[0], d);
      }
      os << " * ";
      // Right operand stays unparenthesized when it is itself a product.
      if (s.parts[1].kind == Scheme::Kind::Sigma)
        print_scheme(os, s.parts[1], d);
      else
        print_operand(os, s.parts[1], d);
      return;
    case Scheme::Kind::Condition:
      print_pattern(os, s.sides[0]);
      os << " == ";
      print_pattern(os, s.sides[1]);
      return;
  }
}

}  // namespace detail

inline std::string pretty(const Pattern& p) {
  std::ostringstream os;
  detail::print_pattern(os, p);
  return os.str();
}

/// Renders a declaration in the DSL; parsing the output gives back an equal AST.
inline std::string pretty(const QITDecl& d) {
  std::ostringstream os;
  for (const auto& w : d.with) {
    os << "with " << w.name << " = ";
    switch (w.kind) {
      case Instantiation::Kind::Enum:
        os << '{';
        for (std::size_t i = 0; i < w.elements.size(); ++i) os << (i ? ", " : "") << w.elements[i];
        os << '}';
        break;
      case Instantiation::Kind::Nat: os << "nat"; break;
      case Instantiation::Kind::Perms:
        os << "perms {";
        for (std::size_t i = 0; i < w.perms.size(); ++i) {
          os << (i ? ", " : "") << w.perms[i].first << " = [";
          for (std::size_t k = 0; k < w.perms[i].second.size(); ++k) os << (k ? ", " : "") << w.perms[i].second[k];
          os << ']';
        }
        os << '}';
        break;
    }
    os << '\n';
  }
  os << "data " << d.name;
  for (const auto& p : d.params) os << " (" << p << " : Set)";
  os << " : Set where\n";
  for (const auto& c : d.constructors) {
    os << "  " << c.name << " : ";
    for (const auto& e : c.telescope) {
      if (e.binder) {
        os << '(' << *e.binder << " : ";
        detail::print_scheme(os, e.type, d);
        os << ')';
      } else if (e.type.kind == Scheme::Kind::Pi || e.type.kind == Scheme::Kind::Condition ||
                 (e.type.kind == Scheme::Kind::Sigma && e.type.binder)) {
        os << '(';
        detail::print_scheme(os, e.type, d);
        os << ')';
      } else {
        detail::print_scheme(os, e.type, d);
      }
      os << " -> ";
    }
    if (c.equation) {
      detail::print_pattern(os, c.equation->first);
      os << " == ";
      detail::print_pattern(os, c.equation->second);
    } else {
      detail::print_self(os, d);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qwt::schema
