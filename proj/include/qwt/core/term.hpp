#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "qwt/core/branch_map.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"

namespace qwt {

using VarIndex = std::uint32_t;

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

template <class X>
int three_way(const X& a, const X& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}
}  // namespace detail

/// Terms of the free monad T X over a signature: Var leaves (eta) and
/// operator nodes (sigma). Immutable and shared; copying is cheap.
template <class X>
class Term {
 public:
  using Leaf = X;

  static Term var(X x) {
    Term t;
    t.rep_ = std::make_shared<const Rep>(Rep::make_var(std::move(x)));
    return t;
  }

  static Term node(std::string op, BranchMap<Term> branches) {
    return node(SNode<Term>{std::move(op), std::move(branches)});
  }

  static Term node(SNode<Term> s) {
    Term t;
    t.rep_ = std::make_shared<const Rep>(Rep::make_node(std::move(s)));
    return t;
  }

  static Term constant(std::string op) { return node(std::move(op), BranchMap<Term>::finite({})); }

  bool is_var() const { return std::holds_alternative<X>(rep_->body); }
  const X& var_value() const { return std::get<X>(rep_->body); }
  const SNode<Term>& node_value() const { return std::get<SNode<Term>>(rep_->body); }
  const std::string& op() const { return node_value().op; }
  const BranchMap<Term>& branches() const { return node_value().branches; }

  /// Node count: a Var counts 1; a node counts 1 plus its stored children.
  std::size_t size() const { return rep_->size; }
  std::size_t hash() const { return rep_->hash; }
  bool same_object(const Term& o) const { return rep_ == o.rep_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.rep_->hash != b.rep_->hash || a.rep_->size != b.rep_->size) return false;
    return a.rep_->body == b.rep_->body;
  }

  /// Canonical total order: size, then vars before nodes, then operator
  /// name, then branches pointwise.
  friend int compare(const Term& a, const Term& b) {
    if (a.rep_ == b.rep_) return 0;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (a.is_var()) return detail::three_way(a.var_value(), b.var_value());
    if (int c = a.op().compare(b.op()); c != 0) return c < 0 ? -1 : 1;
    return a.branches().compare(b.branches(), [](const Term& x, const Term& y) { return compare(x, y); });
  }

  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

 private:
  struct Rep {
    std::variant<X, SNode<Term>> body;
    std::size_t size = 1;
    std::size_t hash = 0;

    static Rep make_var(X x) {
      Rep r;
      r.hash = detail::hash_mix(0x51ed27, std::hash<X>{}(x));
      r.body = std::move(x);
      return r;
    }

    static Rep make_node(SNode<Term> s) {
      Rep r;
      std::size_t h = detail::hash_mix(std::hash<std::string>{}(s.op), s.branches.is_omega() ? 7 : 3);
      std::size_t sz = 1;
      if (s.branches.is_omega()) {
        for (const auto& [i, t] : s.branches.omega_rep().table) {
          h = detail::hash_mix(detail::hash_mix(h, i), t.hash());
          sz += t.size();
        }
        h = detail::hash_mix(h, s.branches.omega_rep().fallback.hash());
        sz += s.branches.omega_rep().fallback.size();
      } else {
        for (const auto& t : s.branches.items()) {
          h = detail::hash_mix(h, t.hash());
          sz += t.size();
        }
      }
      r.size = sz;
      r.hash = h;
      r.body = std::move(s);
      return r;
    }
  };

  Term() = default;
  std::shared_ptr<const Rep> rep_;
};

template <class X>
struct TermHash {
  std::size_t operator()(const Term<X>& t) const { return t.hash(); }
};

using OpenTerm = Term<VarIndex>;

/// Kleisli extension (bind): replaces every Var x by rho(x).
template <class X, class F>
auto subst(const Term<X>& t, F&& rho) -> std::decay_t<std::invoke_result_t<F&, const X&>> {
  using Out = std::decay_t<std::invoke_result_t<F&, const X&>>;
  if (t.is_var()) return rho(t.var_value());
  return Out::node(t.op(), t.branches().map([&](const Term<X>& c) { return subst(c, rho); }));
}

/// T' f t = t >>= (eta . f)
template <class X, class F>
auto map_t(F&& f, const Term<X>& t) {
  using Y = std::decay_t<std::invoke_result_t<F&, const X&>>;
  return subst(t, [&](const X& x) { return Term<Y>::var(f(x)); });
}

/// iota = sigma . S' eta
template <class X>
Term<X> iota(const SNode<X>& s) {
  return Term<X>::node(s.op, s.branches.map([](const X& x) { return Term<X>::var(x); }));
}

/// t >>= env into an algebra: structural recursion with Var x -> env(x) and
/// sigma(a, b) -> alg(a, eval . b).
template <class X, class Env, class Alg>
auto eval_alg(const Term<X>& t, Env&& env, Alg&& alg) -> std::decay_t<std::invoke_result_t<Env&, const X&>> {
  using Y = std::decay_t<std::invoke_result_t<Env&, const X&>>;
  if (t.is_var()) return env(t.var_value());
  SNode<Y> layer{t.op(), t.branches().map([&](const Term<X>& c) { return eval_alg(c, env, alg); })};
  return alg(layer);
}

template <class X>
void collect_vars(const Term<X>& t, std::set<X>& out) {
  if (t.is_var()) {
    out.insert(t.var_value());
    return;
  }
  t.branches().for_each([&](const Term<X>& c) { collect_vars(c, out); });
}

template <class X>
std::set<X> vars_of(const Term<X>& t) {
  std::set<X> out;
  collect_vars(t, out);
  return out;
}

template <class X>
bool is_closed(const Term<X>& t) {
  if (t.is_var()) return false;
  bool closed = true;
  t.branches().for_each([&](const Term<X>& c) { closed = closed && is_closed(c); });
  return closed;
}

/// Depth of nested operator layers (a Var has depth 0).
template <class X>
std::size_t depth_of(const Term<X>& t) {
  if (t.is_var()) return 0;
  std::size_t d = 0;
  t.branches().for_each([&](const Term<X>& c) { d = std::max(d, depth_of(c)); });
  return d + 1;
}

/// Throws unless every operator is declared with a matching branch shape.
template <class X>
void check_term(const Signature& sig, const Term<X>& t) {
  if (t.is_var()) return;
  const Arity& a = sig.arity(t.op());
  if (!t.branches().fits(a))
    fail(ErrorCode::ArityMismatch, "operator '" + t.op() + "' applied with the wrong branch shape");
  t.branches().for_each([&](const Term<X>& c) { check_term(sig, c); });
}

}  // namespace qwt
