#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"
#include "qwt/equations/system.hpp"

namespace qwt {

struct Theory {
  Signature signature;
  EquationSystem equations;
};

/// Branch map sending position i to the variable offset + i. Omega arities
/// use probe + 1 variables: one per index below the probe, and a tail
/// variable standing for every later index.
inline BranchMap<OpenTerm> identity_branches(const Arity& a, VarIndex offset, std::size_t probe) {
  if (a.is_finite()) {
    std::vector<OpenTerm> items;
    for (std::size_t i = 0; i < a.count(); ++i) items.push_back(OpenTerm::var(offset + static_cast<VarIndex>(i)));
    return BranchMap<OpenTerm>::finite(std::move(items));
  }
  std::vector<std::pair<std::size_t, OpenTerm>> table;
  for (std::size_t i = 0; i < probe; ++i) table.emplace_back(i, OpenTerm::var(offset + static_cast<VarIndex>(i)));
  return BranchMap<OpenTerm>::omega(std::move(table), OpenTerm::var(offset + static_cast<VarIndex>(probe)));
}

inline VarIndex variables_for(const Arity& a, std::size_t probe) {
  return static_cast<VarIndex>(a.is_omega() ? probe + 1 : a.count());
}

/// Free-algebra transform: generators become nullary operators placed
/// before the original ones; every equation is re-coded by l >>= eta, which
/// leaves its terms unchanged.
inline Theory freeify(const Signature& sig, const EquationSystem& sys, const std::vector<std::string>& generators) {
  Signature out;
  for (const auto& g : generators) {
    if (sig.contains(g)) fail(ErrorCode::DuplicateName, "generator '" + g + "' clashes with an operator");
    out.add(g, Arity::finite(0));
  }
  for (const auto& op : sig.ops()) out.add(op.name, op.arity);
  std::vector<Equation> eqs;
  for (const auto& e : sys.equations()) {
    auto eta = [](VarIndex v) { return OpenTerm::var(v); };
    eqs.push_back({e.name, e.vars, subst(e.lhs, eta), subst(e.rhs, eta)});
  }
  return {std::move(out), EquationSystem(std::move(eqs), sys.probe())};
}

struct SuspensionCell {
  std::string name;
  std::string left;
  std::string right;
};

/// W-suspension (A', B', C', l', r'): the operators are A' with arities B';
/// each cell c relates sigma(l' c, eta . inl) and sigma(r' c, eta . inr) over
/// the variables B'(l' c) + B'(r' c).
inline Theory from_w_suspension(const std::vector<OpDecl>& points, const std::vector<SuspensionCell>& cells,
                                std::size_t probe = 2) {
  Signature sig(points);
  std::vector<Equation> eqs;
  for (const auto& c : cells) {
    const Arity& la = sig.arity(c.left);
    const Arity& ra = sig.arity(c.right);
    VarIndex lv = variables_for(la, probe);
    VarIndex rv = variables_for(ra, probe);
    eqs.push_back({c.name, static_cast<VarIndex>(lv + rv), OpenTerm::node(c.left, identity_branches(la, 0, probe)),
                   OpenTerm::node(c.right, identity_branches(ra, lv, probe))});
  }
  return {sig, make_system(sig, std::move(eqs), probe)};
}

/// W-type with reductions (Y, X, R): operators Y with arities X; for every y
/// the equation sigma(y, eta) == eta(R y). R must pick a position of every
/// operator, so nullary operators are rejected.
inline Theory from_w_reductions(const std::vector<OpDecl>& ops, const std::vector<std::optional<std::size_t>>& reduce,
                                std::size_t probe = 2) {
  if (reduce.size() != ops.size()) fail(ErrorCode::InvalidArgument, "reindexing map must cover every operator");
  Signature sig(ops);
  std::vector<Equation> eqs;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    if (!reduce[i] || !op.arity.admits(*reduce[i]))
      fail(ErrorCode::InvalidArgument, "reindexing map undefined at '" + op.name + "' (its arity has no such position)");
    std::size_t pos = *reduce[i];
    VarIndex var = static_cast<VarIndex>(op.arity.is_omega() && pos >= probe ? probe : pos);
    eqs.push_back({"reduce[" + op.name + "]", variables_for(op.arity, probe),
                   OpenTerm::node(op.name, identity_branches(op.arity, 0, probe)), OpenTerm::var(var)});
  }
  return {sig, make_system(sig, std::move(eqs), probe)};
}

}  // namespace qwt
