#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qwt/core/algebra.hpp"
#include "qwt/core/error.hpp"
#include "qwt/engine/qw_state.hpp"
#include "qwt/equations/lift.hpp"
#include "qwt/initiality/rec.hpp"

namespace qwt {

/// A family P over the carrier with a dependent algebra p. `fiber(c)` lists
/// the elements of P(c) (finite, possibly truncated); `step(s, v)` is p
/// applied to the S-node of child classes and the branch map of child values.
template <class V>
struct DepTarget {
  std::function<std::vector<V>(ClassId)> fiber;
  std::function<V(const SNode<ClassId>&, const BranchMap<V>&)> step;
};

template <class V>
bool in_fiber(const DepTarget<V>& p, ClassId c, const V& v) {
  for (const V& w : p.fiber(c))
    if (w == v) return true;
  return false;
}

/// The non-dependent family: P(c) is the whole carrier of alg, p is alg.
inline DepTarget<Value> constant_family(const FiniteAlgebra& alg) {
  std::vector<Value> carrier(alg.size());
  for (Value v = 0; v < alg.size(); ++v) carrier[v] = v;
  return {[carrier](ClassId) { return carrier; },
          [&alg](const SNode<ClassId>& s, const BranchMap<Value>& vals) { return alg(SNode<Value>{s.op, vals}); }};
}

/// Dependent elimination. Each class is computed by lifting p over its
/// least-stage member; the index component of the lift is checked to be
/// Proved equal to the class itself.
template <class V>
class Eliminator {
 public:
  Eliminator(QWState& st, DepTarget<V> p) : st_(st), p_(std::move(p)) {}

  V operator()(ClassId c) {
    ClassId root = st_.find(c);
    if (auto it = memo_.find(root.value); it != memo_.end()) return it->second;
    V v = via(st_.min_stage_member(root), root);
    memo_.emplace(st_.find(root).value, v);
    return v;
  }

  /// Lifts p over a particular member's payload.
  V via(ClassId member, ClassId cls) {
    const Payload payload = st_.payload(member);
    auto [idx, v] = lift(payload, env(), index_alg(), step(), fiber_test());
    if (!st_.decide_eq(idx, cls).proved)
      fail(ErrorCode::CoherenceFailure, "first projection of the lifted pair is not the eliminated class");
    return v;
  }

  const DepTarget<V>& family() const { return p_; }

  auto env() {
    return [this](const ClassId& d) { return std::pair<ClassId, V>{d, (*this)(d)}; };
  }
  auto index_alg() {
    return [this](const SNode<ClassId>& s) { return st_.intro(s); };
  }
  auto step() {
    return [this](const SNode<ClassId>& s, const BranchMap<V>& vals) { return p_.step(s, vals); };
  }
  auto fiber_test() {
    return [this](ClassId c, const V& v) { return in_fiber(p_, c, v); };
  }

 private:
  QWState& st_;
  DepTarget<V> p_;
  std::unordered_map<std::uint32_t, V> memo_;
};

struct CoherenceReport {
  bool ok = true;
  std::size_t instances = 0;
  std::optional<std::string> equation;
  std::vector<ClassId> env;
  std::string reason;
};

/// The dependent-satisfaction side condition: for every equation and every
/// environment of (class, value in P(class)) pairs drawn from the fragment,
/// lifting both sides lands on Proved-equal indices with equal values.
template <class V>
CoherenceReport check_coherence(QWState& st, const DepTarget<V>& p, const std::vector<ClassId>& fragment,
                                std::size_t budget = 1u << 20) {
  std::vector<std::pair<ClassId, V>> points;
  for (ClassId c : fragment)
    for (const V& v : p.fiber(c)) points.emplace_back(c, v);
  Eliminator<V> el(st, p);
  CoherenceReport out;
  const auto& sys = st.equations();
  for (std::size_t e : sys.name_order()) {
    const Equation& eq = sys.equations()[e];
    auto total = assignment_count(points.size(), eq.vars, budget);
    if (!total) fail(ErrorCode::BudgetExceeded, "too many dependent environments for '" + eq.name + "'");
    std::vector<Value> idx(eq.vars);
    for (std::size_t k = 0; k < *total; ++k) {
      FiniteAlgebra::decode(k, points.size(), idx);
      auto rho = [&](VarIndex v) { return points[idx[v]]; };
      auto [li, lv] = lift(eq.lhs, rho, el.index_alg(), el.step(), el.fiber_test());
      auto [ri, rv] = lift(eq.rhs, rho, el.index_alg(), el.step(), el.fiber_test());
      ++out.instances;
      std::string reason;
      if (!st.decide_eq(li, ri).proved)
        reason = "indices not proved equal";
      else if (!(lv == rv))
        reason = "values differ";
      if (!reason.empty()) {
        out.ok = false;
        out.equation = eq.name;
        for (Value i : idx) out.env.push_back(points[i].first);
        out.reason = reason;
        return out;
      }
    }
  }
  return out;
}

struct CompReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<SNode<ClassId>> counterexample;
};

/// qwcomp on a fragment: elim(qwintro(a, b)) == p(a, b, elim . b).
template <class V>
CompReport check_comp(QWState& st, const DepTarget<V>& p, const std::vector<ClassId>& fragment,
                      std::size_t budget = 1u << 20) {
  std::vector<SNode<ClassId>> nodes;
  for_each_fragment_node(st, fragment, budget, [&](const SNode<ClassId>& s) {
    nodes.push_back(s);
    return true;
  });
  std::vector<ClassId> intros;
  for (const auto& s : nodes) intros.push_back(st.intro(s));
  st.saturate();
  Eliminator<V> el(st, p);
  CompReport out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ++out.checked;
    V lhs = el(intros[i]);
    V rhs = p.step(nodes[i], nodes[i].branches.map([&](const ClassId& c) { return el(c); }));
    if (!(lhs == rhs)) {
      out.ok = false;
      out.counterexample = nodes[i];
      return out;
    }
  }
  return out;
}

}  // namespace qwt
