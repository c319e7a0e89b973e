#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qwt/core/json_io.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"
#include "qwt/equations/system.hpp"
#include "qwt/schema/analysis.hpp"
#include "qwt/schema/ast.hpp"
#include "qwt/schema/translate.hpp"

namespace qwt::schema {

/// A constant type after instantiation.
struct ConstType {
  Instantiation::Kind kind = Instantiation::Kind::Enum;
  std::vector<std::string> elements;                           // Enum
  std::map<std::string, std::vector<std::size_t>> perms;       // Perms
  std::vector<std::string> perm_order;                         // Perms, declared order
};

/// Slot layout of a self-typed argument: `finite` ordinary slots followed
/// by at most one N-indexed family.
struct Shape {
  std::size_t finite = 0;
  bool omega = false;
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// How a telescope entry contributes to the encoding.
struct EntryRole {
  enum class Kind { Param, Arg, Witness } kind = Kind::Param;
  std::vector<std::string> values;  // Param: admissible values
  std::string type;                 // Param: constant type name
  Shape shape;                      // Arg
};

struct CtorLayout {
  std::string name;
  std::vector<EntryRole> roles;
  Arity arity = Arity::finite(0);
};

struct Elaboration {
  QITDecl decl;
  Classification classification;
  std::size_t probe = 2;
  std::map<std::string, ConstType> types;
  std::vector<CtorLayout> element_ctors;
  Theory theory;

  const CtorLayout* layout(const std::string& ctor) const {
    for (const auto& c : element_ctors)
      if (c.name == ctor) return &c;
    return nullptr;
  }
};

inline std::string instance_name(const std::string& ctor, const std::vector<std::string>& params) {
  if (params.empty()) return ctor;
  std::string out = ctor + "[";
  for (std::size_t i = 0; i < params.size(); ++i) out += (i ? "," : "") + params[i];
  return out + "]";
}

namespace detail {

inline ConstType resolve_type(const QITDecl& decl, const std::string& name, Pos pos) {
  ConstType t;
  if (is_builtin_nat(name)) {
    t.kind = Instantiation::Kind::Nat;
    return t;
  }
  const Instantiation* w = decl.instantiation(name);
  if (!w) raise(ErrorKind::NonFinitaryConstant, pos, "type '" + name + "' has no 'with' instantiation");
  t.kind = w->kind;
  t.elements = w->elements;
  for (const auto& [n, table] : w->perms) {
    t.perms.emplace(n, table);
    t.perm_order.push_back(n);
  }
  return t;
}

inline void check_bijection(const Instantiation& w) {
  for (const auto& [name, table] : w.perms) {
    std::vector<bool> hit(table.size(), false);
    for (std::size_t v : table) {
      if (v >= table.size() || hit[v])
        raise(ErrorKind::NonBijective, w.pos, "permutation '" + name + "' is not a bijection on 0.." +
                                                  std::to_string(table.size() == 0 ? 0 : table.size() - 1));
      hit[v] = true;
    }
  }
}

class Elaborator {
 public:
  Elaborator(const QITDecl& decl, std::size_t probe) : decl_(decl), probe_(probe) {}

  Elaboration run() {
    check_positivity(decl_);
    for (const auto& c : decl_.constructors)
      for (const auto& e : c.telescope)
        if (has_condition(e.type))
          raise(ErrorKind::ConditionalUnsupported, e.pos,
                "constructor '" + c.name + "' has a condition; conditional declarations have no QW-type encoding");
    for (const auto& w : decl_.with) check_bijection(w);

    Elaboration out;
    out.decl = decl_;
    out.classification = classify(decl_);
    out.probe = probe_;

    Signature sig;
    for (const auto& c : decl_.constructors) {
      if (c.is_equality()) continue;
      CtorLayout lay = element_layout(c);
      for (const auto& combo : combos(lay.roles)) sig.add(instance_name(c.name, combo), lay.arity);
      layouts_.push_back(std::move(lay));
    }
    out.element_ctors = layouts_;

    std::vector<Equation> eqs;
    for (const auto& c : decl_.constructors)
      if (c.is_equality()) equality(c, eqs);
    out.types = types_;
    out.theory = Theory{sig, make_system(sig, std::move(eqs), probe_)};
    return out;
  }

  /// Translates a closed pattern (term literal).
  OpenTerm closed_term(const Pattern& p) {
    for (const auto& c : decl_.constructors)
      if (!c.is_equality()) layouts_.push_back(element_layout(c));
    Context none;
    return term(p, none);
  }

 private:
  struct Binding {
    enum class Kind { Param, Block } kind = Kind::Param;
    std::string value;        // Param
    std::string type;         // Param: constant type name
    VarIndex offset = 0;      // Block
    Shape shape;              // Block
  };
  using Context = std::map<std::string, Binding>;

  const ConstType& type(const std::string& name, Pos pos) {
    auto it = types_.find(name);
    if (it == types_.end()) it = types_.emplace(name, resolve_type(decl_, name, pos)).first;
    return it->second;
  }

  Shape shape_of(const Scheme& s) {
    switch (s.kind) {
      case Scheme::Kind::Self: return {1, false};
      case Scheme::Kind::Pi: {
        const Scheme& dom = s.parts[0];
        Shape body = shape_of(s.parts[1]);
        if (dom.kind != Scheme::Kind::Const || !dom.args.empty())
          raise(ErrorKind::UnsupportedShape, dom.pos, "function domains must be named constant types");
        const ConstType& t = type(dom.name, dom.pos);
        if (t.kind == Instantiation::Kind::Enum) {
          if (body.omega && t.elements.size() != 1)
            raise(ErrorKind::UnsupportedShape, s.pos, "at most one N-indexed family per constructor");
          return {body.finite * t.elements.size(), body.omega};
        }
        if (t.kind == Instantiation::Kind::Nat) {
          if (body != Shape{1, false})
            raise(ErrorKind::UnsupportedShape, s.pos, "N-indexed arguments must have codomain '" + decl_.name + "'");
          return {0, true};
        }
        raise(ErrorKind::UnsupportedShape, dom.pos, "'" + dom.name + "' cannot index constructor arguments");
      }
      case Scheme::Kind::Sigma: {
        if (!mentions_self(s.parts[0]) || !mentions_self(s.parts[1]))
          raise(ErrorKind::UnsupportedShape, s.pos, "pairs must hold arguments of the declared type on both sides");
        Shape a = shape_of(s.parts[0]);
        Shape b = shape_of(s.parts[1]);
        if (a.omega && b.omega) raise(ErrorKind::UnsupportedShape, s.pos, "at most one N-indexed family per constructor");
        return {a.finite + b.finite, a.omega || b.omega};
      }
      default: raise(ErrorKind::UnsupportedShape, s.pos, "not an argument of the declared type");
    }
  }

  bool any_infinite(const Scheme& s) {
    if (s.kind == Scheme::Kind::Const) return type(s.name, s.pos).kind != Instantiation::Kind::Enum;
    if (s.kind == Scheme::Kind::Pi || s.kind == Scheme::Kind::Sigma)
      return any_infinite(s.parts[0]) || any_infinite(s.parts[1]);
    return false;
  }

  CtorLayout element_layout(const Constructor& c) {
    CtorLayout lay;
    lay.name = c.name;
    Shape total;
    for (const auto& e : c.telescope) {
      EntryRole role;
      if (mentions_self(e.type)) {
        role.kind = EntryRole::Kind::Arg;
        role.shape = shape_of(e.type);
        if (role.shape.omega && total.omega)
          raise(ErrorKind::UnsupportedShape, e.pos, "at most one N-indexed family per constructor");
        total.finite += role.shape.finite;
        total.omega = total.omega || role.shape.omega;
      } else if (e.type.kind == Scheme::Kind::Const && e.type.args.empty()) {
        const ConstType& t = type(e.type.name, e.type.pos);
        if (t.kind != Instantiation::Kind::Enum)
          raise(ErrorKind::NonFinitaryConstant, e.type.pos,
                "element constructor '" + c.name + "' is indexed by the infinite type '" + e.type.name + "'");
        role.kind = EntryRole::Kind::Param;
        role.values = t.elements;
        role.type = e.type.name;
      } else if (any_infinite(e.type)) {
        raise(ErrorKind::NonFinitaryConstant, e.type.pos, "element constructor '" + c.name + "' has an infinite parameter");
      } else {
        raise(ErrorKind::UnsupportedShape, e.type.pos, "unsupported parameter type in '" + c.name + "'");
      }
      lay.roles.push_back(std::move(role));
    }
    lay.arity = total.omega ? Arity::omega() : Arity::finite(total.finite);
    return lay;
  }

  static std::vector<std::vector<std::string>> combos(const std::vector<EntryRole>& roles) {
    std::vector<std::vector<std::string>> out{{}};
    for (const auto& r : roles) {
      if (r.kind != EntryRole::Kind::Param) continue;
      std::vector<std::vector<std::string>> next;
      for (const auto& prefix : out)
        for (const auto& v : r.values) {
          auto p = prefix;
          p.push_back(v);
          next.push_back(std::move(p));
        }
      out = std::move(next);
    }
    return out;
  }

  VarIndex block_size(const Shape& s) const {
    return static_cast<VarIndex>(s.finite + (s.omega ? probe_ + 1 : 0));
  }

  void equality(const Constructor& c, std::vector<Equation>& eqs) {
    std::vector<EntryRole> roles;
    std::vector<VarIndex> offsets;
    VarIndex vars = 0;
    // Function-typed parameters (f : N -> N) await a later witness (_ : P f).
    std::map<std::string, std::size_t> pending_fn;
    for (std::size_t i = 0; i < c.telescope.size(); ++i) {
      const Entry& e = c.telescope[i];
      EntryRole role;
      offsets.push_back(vars);
      if (mentions_self(e.type)) {
        role.kind = EntryRole::Kind::Arg;
        role.shape = shape_of(e.type);
        vars += block_size(role.shape);
      } else if (e.type.kind == Scheme::Kind::Const && e.type.args.empty()) {
        const ConstType& t = type(e.type.name, e.type.pos);
        if (t.kind == Instantiation::Kind::Nat)
          raise(ErrorKind::NonFinitaryConstant, e.type.pos, "equation '" + c.name + "' is indexed by '" + e.type.name + "'");
        role.kind = EntryRole::Kind::Param;
        role.type = e.type.name;
        role.values = t.kind == Instantiation::Kind::Enum ? t.elements : t.perm_order;
      } else if (e.type.kind == Scheme::Kind::Const && e.type.args.size() == 1) {
        const ConstType& t = type(e.type.name, e.type.pos);
        auto it = pending_fn.find(e.type.args[0]);
        if (t.kind != Instantiation::Kind::Perms || it == pending_fn.end())
          raise(ErrorKind::UnsupportedShape, e.type.pos,
                "'" + e.type.name + " " + e.type.args[0] + "' must be a permutation witness for an earlier function");
        roles[it->second].values = t.perm_order;
        roles[it->second].type = e.type.name;
        pending_fn.erase(it);
        role.kind = EntryRole::Kind::Witness;
      } else if (is_nat_endo(e.type) && e.binder) {
        role.kind = EntryRole::Kind::Param;
        pending_fn.emplace(*e.binder, i);
      } else if (any_infinite(e.type)) {
        raise(ErrorKind::NonFinitaryConstant, e.type.pos, "equation '" + c.name + "' has an infinite parameter");
      } else {
        raise(ErrorKind::UnsupportedShape, e.type.pos, "unsupported parameter type in '" + c.name + "'");
      }
      roles.push_back(std::move(role));
    }
    for (const auto& [name, idx] : pending_fn)
      raise(ErrorKind::NonFinitaryConstant, c.telescope[idx].pos,
            "function parameter '" + name + "' ranges over all of N -> N; constrain it with a permutation witness");

    for (const auto& combo : combos(roles)) {
      Context ctx;
      std::size_t k = 0;
      for (std::size_t i = 0; i < roles.size(); ++i) {
        const Entry& e = c.telescope[i];
        if (roles[i].kind == EntryRole::Kind::Param) {
          Binding b;
          b.value = combo[k++];
          b.type = roles[i].type;
          if (e.binder) ctx[*e.binder] = b;
        } else if (roles[i].kind == EntryRole::Kind::Arg && e.binder) {
          Binding b;
          b.kind = Binding::Kind::Block;
          b.offset = offsets[i];
          b.shape = roles[i].shape;
          ctx[*e.binder] = b;
        }
      }
      eqs.push_back({instance_name(c.name, combo), vars, term(c.equation->first, ctx), term(c.equation->second, ctx)});
    }
  }

  bool is_nat_endo(const Scheme& s) {
    if (s.kind != Scheme::Kind::Pi) return false;
    const Scheme& d = s.parts[0];
    const Scheme& b = s.parts[1];
    return d.kind == Scheme::Kind::Const && b.kind == Scheme::Kind::Const && d.args.empty() && b.args.empty() &&
           type(d.name, d.pos).kind == Instantiation::Kind::Nat && type(b.name, b.pos).kind == Instantiation::Kind::Nat;
  }

  const CtorLayout* layout(const std::string& name) const {
    for (const auto& l : layouts_)
      if (l.name == name) return &l;
    return nullptr;
  }

  /// A term of the declared type.
  OpenTerm term(const Pattern& p, const Context& ctx) {
    if (p.kind != Pattern::Kind::Apply)
      raise(ErrorKind::UnsupportedShape, p.pos, "expected a term of type '" + decl_.name + "'");
    if (auto it = ctx.find(p.head); it != ctx.end()) {
      const Binding& b = it->second;
      if (b.kind != Binding::Kind::Block || b.shape != Shape{1, false} || !p.args.empty())
        raise(ErrorKind::UnsupportedShape, p.pos, "'" + p.head + "' is not a variable of type '" + decl_.name + "'");
      return OpenTerm::var(b.offset);
    }
    const CtorLayout* lay = layout(p.head);
    if (!lay) raise(ErrorKind::ScopeError, p.pos, "'" + p.head + "' is not an element constructor");
    if (p.args.size() != lay->roles.size())
      raise(ErrorKind::SyntaxError, p.pos,
            "'" + p.head + "' takes " + std::to_string(lay->roles.size()) + " arguments, got " + std::to_string(p.args.size()));

    std::vector<std::string> params;
    std::vector<OpenTerm> finite;
    std::optional<std::pair<std::vector<std::pair<std::size_t, OpenTerm>>, OpenTerm>> family;
    for (std::size_t i = 0; i < lay->roles.size(); ++i) {
      const EntryRole& r = lay->roles[i];
      const Pattern& a = p.args[i];
      if (r.kind == EntryRole::Kind::Param) {
        params.push_back(param_value(a, r, ctx));
        continue;
      }
      argument(a, r.shape, ctx, finite, family);
    }
    std::string op = instance_name(p.head, params);
    if (!lay->arity.is_omega()) return OpenTerm::node(op, BranchMap<OpenTerm>::finite(std::move(finite)));
    std::vector<std::pair<std::size_t, OpenTerm>> table;
    for (std::size_t i = 0; i < finite.size(); ++i) table.emplace_back(i, finite[i]);
    for (auto& [j, t] : family->first) table.emplace_back(finite.size() + j, t);
    return OpenTerm::node(op, BranchMap<OpenTerm>::omega(std::move(table), family->second));
  }

  std::string param_value(const Pattern& a, const EntryRole& r, const Context& ctx) {
    if (a.kind != Pattern::Kind::Apply || !a.args.empty())
      raise(ErrorKind::UnsupportedShape, a.pos, "expected a parameter value of type '" + r.type + "'");
    if (auto it = ctx.find(a.head); it != ctx.end()) {
      if (it->second.kind != Binding::Kind::Param || it->second.type != r.type)
        raise(ErrorKind::ScopeError, a.pos, "'" + a.head + "' is not a parameter of type '" + r.type + "'");
      return it->second.value;
    }
    if (std::find(r.values.begin(), r.values.end(), a.head) == r.values.end())
      raise(ErrorKind::ScopeError, a.pos, "'" + a.head + "' is not an element of '" + r.type + "'");
    return a.head;
  }

  void argument(const Pattern& a, const Shape& shape, const Context& ctx, std::vector<OpenTerm>& finite,
                std::optional<std::pair<std::vector<std::pair<std::size_t, OpenTerm>>, OpenTerm>>& family) {
    if (shape == Shape{1, false}) {
      finite.push_back(term(a, ctx));
      return;
    }
    if (a.kind == Pattern::Kind::Apply && a.args.empty()) {
      auto it = ctx.find(a.head);
      if (it == ctx.end() || it->second.kind != Binding::Kind::Block || it->second.shape != shape)
        raise(ErrorKind::UnsupportedShape, a.pos, "'" + a.head + "' does not have the argument's shape");
      VarIndex off = it->second.offset;
      for (std::size_t i = 0; i < shape.finite; ++i) finite.push_back(OpenTerm::var(off + static_cast<VarIndex>(i)));
      if (shape.omega) {
        std::vector<std::pair<std::size_t, OpenTerm>> table;
        VarIndex base = off + static_cast<VarIndex>(shape.finite);
        for (std::size_t j = 0; j < probe_; ++j) table.emplace_back(j, OpenTerm::var(base + static_cast<VarIndex>(j)));
        family.emplace(std::move(table), OpenTerm::var(base + static_cast<VarIndex>(probe_)));
      }
      return;
    }
    if (shape != Shape{0, true})
      raise(ErrorKind::UnsupportedShape, a.pos, "only N-indexed arguments accept compositions and tables");
    if (a.kind == Pattern::Kind::Compose) {
      const Pattern& g = a.args.at(0);
      auto git = ctx.find(g.head);
      if (g.kind != Pattern::Kind::Apply || git == ctx.end() || git->second.kind != Binding::Kind::Block ||
          git->second.shape != shape)
        raise(ErrorKind::UnsupportedShape, g.pos, "the left operand of '.' must be an N-indexed binder");
      auto fit = ctx.find(a.head);
      if (fit == ctx.end() || fit->second.kind != Binding::Kind::Param)
        raise(ErrorKind::ScopeError, a.pos, "'" + a.head + "' is not a permutation parameter");
      const ConstType& t = types_.at(fit->second.type);
      const auto& perm = t.perms.at(fit->second.value);
      if (perm.size() > probe_)
        raise(ErrorKind::UnsupportedShape, a.pos,
              "permutation '" + fit->second.value + "' moves indices beyond probe depth " + std::to_string(probe_));
      VarIndex base = git->second.offset;
      std::vector<std::pair<std::size_t, OpenTerm>> table;
      for (std::size_t j = 0; j < probe_; ++j) {
        std::size_t src = j < perm.size() ? perm[j] : j;
        table.emplace_back(j, OpenTerm::var(base + static_cast<VarIndex>(src)));
      }
      family.emplace(std::move(table), OpenTerm::var(base + static_cast<VarIndex>(probe_)));
      return;
    }
    if (a.kind == Pattern::Kind::Table) {
      std::vector<std::pair<std::size_t, OpenTerm>> table;
      std::optional<OpenTerm> fallback;
      for (const auto& [k, v] : a.table) {
        if (k == "_") {
          fallback = term(v, ctx);
          continue;
        }
        if (k.empty() || !std::all_of(k.begin(), k.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
          raise(ErrorKind::SyntaxError, a.pos, "table keys must be indices or '_'");
        table.emplace_back(std::stoul(k), term(v, ctx));
      }
      if (!fallback) raise(ErrorKind::SyntaxError, a.pos, "table needs a default entry '_: t'");
      family.emplace(std::move(table), *fallback);
      return;
    }
    raise(ErrorKind::UnsupportedShape, a.pos, "expected an N-indexed argument");
  }

  const QITDecl& decl_;
  std::size_t probe_;
  std::map<std::string, ConstType> types_;
  std::vector<CtorLayout> layouts_;
};

}  // namespace detail

/// Equational declaration -> (signature, equations). Element constructors
/// become one operator per parameter combination, `ctor[p1,..]`, with one
/// branch per slot of their self-typed arguments; equality constructors
/// become one equation per parameter combination, over the self-typed
/// binders in telescope order.
inline Elaboration elaborate(const QITDecl& decl, std::size_t probe = 2) {
  return detail::Elaborator(decl, probe).run();
}

/// A closed term written with the declaration's constructors.
inline OpenTerm elaborate_term(const Elaboration& el, const Pattern& p) {
  detail::Elaborator e(el.decl, el.probe);
  return e.closed_term(p);
}

}  // namespace qwt::schema

namespace qwt {

inline Json to_json(const Theory& t) {
  Json j = Json::object();
  j["signature"] = to_json(t.signature);
  j["equations"] = to_json(t.equations);
  return j;
}

}  // namespace qwt
