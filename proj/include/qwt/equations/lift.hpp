#pragma once

#include <type_traits>
#include <utility>

#include "qwt/core/branch_map.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

/// Dependent bind. `env` maps each variable to an (index, value) pair;
/// `index_alg` is the S-algebra on indices used to compute t >>= fst . env;
/// `step` is the dependent algebra p, called with the S-node of child
/// indices and the branch map of child values; `in_fiber(i, v)` decides
/// membership of v in P(i).
///
/// Returns (t >>= fst . env, lift P p env t). Every intermediate value is
/// checked against its fiber; a miss means `step` is ill-formed and raises
/// FiberMismatch.
template <class X, class Env, class IndexAlg, class Step, class InFiber>
auto lift(const Term<X>& t, Env&& env, IndexAlg&& index_alg, Step&& step, InFiber&& in_fiber)
    -> std::decay_t<std::invoke_result_t<Env&, const X&>> {
  using Pair = std::decay_t<std::invoke_result_t<Env&, const X&>>;
  if (t.is_var()) {
    Pair p = env(t.var_value());
    if (!in_fiber(p.first, p.second)) fail(ErrorCode::FiberMismatch, "environment value is not in its fiber");
    return p;
  }
  auto children = t.branches().map([&](const Term<X>& c) { return lift(c, env, index_alg, step, in_fiber); });
  using Index = typename Pair::first_type;
  SNode<Index> indices{t.op(), children.map([](const Pair& p) { return p.first; })};
  auto values = children.map([](const Pair& p) { return p.second; });
  Index idx = index_alg(indices);
  auto val = step(indices, values);
  if (!in_fiber(idx, val)) fail(ErrorCode::FiberMismatch, "step result for '" + t.op() + "' is not in its fiber");
  return Pair{std::move(idx), std::move(val)};
}

}  // namespace qwt
