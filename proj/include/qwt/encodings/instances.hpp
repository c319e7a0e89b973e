#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qwt/core/error.hpp"
#include "qwt/core/json_io.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"
#include "qwt/equations/system.hpp"
#include "qwt/schema/translate.hpp"

namespace qwt {

/// A ready-made (signature, equations) pair. When present, the oracle
/// decides equality of closed terms.
struct EncodedInstance {
  std::string name;
  Signature signature;
  EquationSystem equations;
  std::function<bool(const OpenTerm&, const OpenTerm&)> oracle;
  std::string notes;

  Theory theory() const { return {signature, equations}; }
};

inline Json to_json(const EncodedInstance& inst) {
  Json j = Json::object();
  j["signature"] = to_json(inst.signature);
  j["equations"] = to_json(inst.equations);
  return j;
}

namespace encodings {

/// Counts of each operator's occurrences in a closed term.
inline std::map<std::string, std::size_t> op_counts(const OpenTerm& t) {
  std::map<std::string, std::size_t> out;
  std::function<void(const OpenTerm&)> go = [&](const OpenTerm& u) {
    if (u.is_var()) fail(ErrorCode::UnboundVariable, "oracle expects a closed term");
    ++out[u.op()];
    u.branches().for_each(go);
  };
  go(t);
  return out;
}

/// Sorted list of the elements a Bag term holds.
inline std::vector<std::string> bag_multiset(const OpenTerm& t) {
  std::vector<std::string> out;
  for (const auto& [op, n] : op_counts(t)) {
    if (op.rfind("cons[", 0) != 0) continue;
    std::string x = op.substr(5, op.size() - 6);
    out.insert(out.end(), n, x);
  }
  return out;
}

}  // namespace encodings

/// Finite multisets over X: nil, cons[x] for each x, and swap[x,y] for every
/// ordered pair. The oracle compares element counts.
inline EncodedInstance bagOf(const std::vector<std::string>& xs, std::size_t probe = 2) {
  std::set<std::string> seen;
  Signature sig;
  sig.add("nil", Arity::finite(0));
  for (const auto& x : xs) {
    if (!seen.insert(x).second) fail(ErrorCode::DuplicateName, "element '" + x + "' listed twice");
    sig.add("cons[" + x + "]", Arity::finite(1));
  }
  auto cons = [](const std::string& x, OpenTerm t) {
    return OpenTerm::node("cons[" + x + "]", BranchMap<OpenTerm>::finite({std::move(t)}));
  };
  std::vector<Equation> eqs;
  for (const auto& x : xs)
    for (const auto& y : xs)
      eqs.push_back({"swap[" + x + "," + y + "]", 1, cons(x, cons(y, OpenTerm::var(0))), cons(y, cons(x, OpenTerm::var(0)))});
  EncodedInstance out;
  out.name = "bag";
  out.signature = sig;
  out.equations = make_system(sig, std::move(eqs), probe);
  out.oracle = [](const OpenTerm& a, const OpenTerm& b) {
    return encodings::bag_multiset(a) == encodings::bag_multiset(b);
  };
  return out;
}

using PermTable = std::pair<std::string, std::vector<std::size_t>>;

/// Throws InvalidArgument unless the table is a permutation of 0..n-1.
inline void check_bijection(const PermTable& p) {
  std::vector<bool> hit(p.second.size(), false);
  for (std::size_t v : p.second) {
    if (v >= hit.size() || hit[v])
      fail(ErrorCode::InvalidArgument, "permutation '" + p.first + "' is not a bijection on its support");
    hit[v] = true;
  }
}

/// omega-branching trees with an X label at every node, quotiented by
/// reindexing the children along each given permutation. A permutation of
/// length n fixes every index >= n; n must not exceed the probe.
inline EncodedInstance omegaTreeOf(const std::vector<std::string>& xs, std::size_t probe,
                                   const std::vector<PermTable>& perms) {
  Signature sig;
  sig.add("leaf", Arity::finite(0));
  for (const auto& x : xs) sig.add("node[" + x + "]", Arity::omega());
  std::vector<Equation> eqs;
  for (const auto& p : perms) {
    check_bijection(p);
    if (p.second.size() > probe)
      fail(ErrorCode::ProbeExceeded, "permutation '" + p.first + "' moves indices beyond probe " + std::to_string(probe));
  }
  for (const auto& x : xs)
    for (const auto& p : perms) {
      std::vector<std::pair<std::size_t, OpenTerm>> lhs, rhs;
      for (std::size_t i = 0; i < probe; ++i) {
        lhs.emplace_back(i, OpenTerm::var(static_cast<VarIndex>(i)));
        std::size_t j = i < p.second.size() ? p.second[i] : i;
        rhs.emplace_back(i, OpenTerm::var(static_cast<VarIndex>(j)));
      }
      auto tail = OpenTerm::var(static_cast<VarIndex>(probe));
      eqs.push_back({"perm[" + x + "," + p.first + "]", static_cast<VarIndex>(probe + 1),
                     OpenTerm::node("node[" + x + "]", BranchMap<OpenTerm>::omega(std::move(lhs), tail)),
                     OpenTerm::node("node[" + x + "]", BranchMap<OpenTerm>::omega(std::move(rhs), tail))});
    }
  EncodedInstance out;
  out.name = "omega-tree";
  out.signature = sig;
  out.equations = make_system(sig, std::move(eqs), probe);
  out.notes = "no total oracle; equality is semi-decided by saturation";
  return out;
}

/// Notations for countable ordinals: zero, succ and an omega-ary sup. The
/// five sup equations are a stand-in chosen for the demo and have not been
/// checked against any reference formalization.
inline EncodedInstance lsOrdinalInstance(std::size_t probe = 2) {
  if (probe < 2) fail(ErrorCode::ProbeExceeded, "the ordinal equations need probe >= 2");
  Signature sig;
  sig.add("zero", Arity::finite(0));
  sig.add("succ", Arity::finite(1));
  sig.add("sup", Arity::omega());
  auto v = [](std::size_t i) { return OpenTerm::var(static_cast<VarIndex>(i)); };
  auto sup = [](std::vector<std::pair<std::size_t, OpenTerm>> table, OpenTerm d) {
    return OpenTerm::node("sup", BranchMap<OpenTerm>::omega(std::move(table), std::move(d)));
  };
  auto succ = [](OpenTerm t) { return OpenTerm::node("succ", BranchMap<OpenTerm>::finite({std::move(t)})); };
  auto zero = OpenTerm::constant("zero");

  std::vector<Equation> eqs;
  // sup of a constant sequence
  eqs.push_back({"supConst", 1, sup({}, v(0)), v(0)});
  // swapping the first two entries (the remaining probe slots stay put)
  {
    std::vector<std::pair<std::size_t, OpenTerm>> l, r;
    for (std::size_t i = 0; i < probe; ++i) {
      l.emplace_back(i, v(i));
      r.emplace_back(i, v(i == 0 ? 1 : i == 1 ? 0 : i));
    }
    eqs.push_back({"supSwap[s01]", static_cast<VarIndex>(probe + 1), sup(l, v(probe)), sup(r, v(probe))});
  }
  // a repeated head entry collapses
  eqs.push_back({"supDup", 2, sup({{0, v(0)}, {1, v(0)}}, v(1)), sup({{0, v(0)}}, v(1))});
  // zero is absorbed by a constant tail
  eqs.push_back({"supZero", 1, sup({{0, zero}}, v(0)), v(0)});
  // a successor heading its own constant tail
  eqs.push_back({"supSucc", 1, sup({{0, succ(v(0))}}, v(0)), succ(v(0))});

  EncodedInstance out;
  out.name = "ordinal";
  out.signature = sig;
  out.equations = make_system(sig, std::move(eqs), probe);
  out.notes = "demo only: equality queries are expected to come back Unknown";
  return out;
}

/// W-suspension with two nullary points p, q glued by one cell.
inline EncodedInstance twoPointSuspension(std::size_t probe = 2) {
  Theory t = from_w_suspension({{"p", Arity::finite(0)}, {"q", Arity::finite(0)}}, {{"glue", "p", "q"}}, probe);
  EncodedInstance out;
  out.name = "two-point-suspension";
  out.signature = t.signature;
  out.equations = t.equations;
  out.oracle = [](const OpenTerm&, const OpenTerm&) { return true; };
  return out;
}

/// W-type with reductions: one unary operator r whose only position is the
/// reduct, so r(t) == t. With a generator v the quotient is a single class;
/// with none it is empty.
inline EncodedInstance unaryReductions(std::size_t probe = 2) {
  Theory t = from_w_reductions({{"r", Arity::finite(1)}}, {std::size_t{0}}, probe);
  EncodedInstance out;
  out.name = "unary-reductions";
  out.signature = t.signature;
  out.equations = t.equations;
  out.oracle = [](const OpenTerm&, const OpenTerm&) { return true; };
  return out;
}

}  // namespace qwt
