#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwt/core/algebra.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/json_io.hpp"
#include "qwt/engine/qw_state.hpp"
#include "qwt/equations/system.hpp"

namespace qwt {

/// A finite algebra with the satisfaction verdict computed for it.
struct RecTarget {
  FiniteAlgebra algebra;
  SatReport sat;
};

inline RecTarget make_rec_target(FiniteAlgebra alg, const EquationSystem& sys) {
  SatReport r = sat_check(alg, sys);
  return {std::move(alg), std::move(r)};
}

inline Json to_json(const RecTarget& t) {
  Json j = Json::object();
  j["algebra"] = to_json(t.algebra);
  j["sat"] = to_json(t.sat);
  return j;
}

inline RecTarget rec_target_from_json(const Signature& sig, const Json& j) {
  try {
    RecTarget t;
    t.algebra = algebra_from_json(sig, j.at("algebra"));
    t.sat.satisfied = j.at("sat").at("verdict").get<std::string>() == "satisfied";
    t.sat.fingerprint = j.at("sat").at("fingerprint").get<std::string>();
    return t;
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, std::string("target: ") + e.what());
  }
}

/// Throws unless the target's verdict is Satisfied and was computed on this
/// exact algebra and system.
inline void validate_target(const RecTarget& t, const EquationSystem& sys) {
  if (!t.sat.satisfied) fail(ErrorCode::InvalidArgument, "target algebra violates equation '" + t.sat.equation + "'");
  if (t.sat.fingerprint != sat_fingerprint(t.algebra, sys))
    fail(ErrorCode::StaleProof, "satisfaction verdict does not match the target algebra and equations");
}

/// Recursion from the carrier into a finite algebra: a class is evaluated
/// through its least-stage member, whose leaves all sit at strictly smaller
/// stages. This does not look at any satisfaction proof; qw_rec does.
class Recursor {
 public:
  Recursor(const QWState& st, const FiniteAlgebra& alg) : st_(st), alg_(alg) {
    if (!(alg.signature() == st.signature()))
      fail(ErrorCode::InvalidArgument, "target algebra is over a different signature");
  }

  Value operator()(ClassId c) {
    ClassId root = st_.find(c);
    if (auto it = memo_.find(root.value); it != memo_.end()) return it->second;
    Value v = via(st_.min_stage_member(root));
    memo_.emplace(root.value, v);
    return v;
  }

  /// Evaluates one particular member's payload.
  Value via(ClassId member) {
    return eval_alg(st_.payload(member), [&](const ClassId& leaf) { return (*this)(leaf); }, alg_);
  }

 private:
  const QWState& st_;
  const FiniteAlgebra& alg_;
  std::unordered_map<std::uint32_t, Value> memo_;
};

inline Value qw_rec(const QWState& st, const RecTarget& target, ClassId c) {
  validate_target(target, st.equations());
  return Recursor(st, target.algebra)(c);
}

/// Every S-node whose branches are drawn from `fragment`, in canonical order.
template <class Visit>
void for_each_fragment_node(const QWState& st, const std::vector<ClassId>& fragment, std::size_t budget, Visit&& visit) {
  for_each_snode(st.signature(), fragment.size(), st.probe(), budget, [&](const SNode<Value>& s) {
    return visit(map_s([&](Value i) { return fragment[i]; }, s));
  });
}

struct RecHomReport {
  bool ok = true;
  std::optional<SNode<ClassId>> counterexample;
  Value lhs = 0;  // s(a, rec . b)
  Value rhs = 0;  // rec(qwintro(a, b))
  std::size_t checked = 0;
};

/// qwrechom on a fragment: s(a, rec . b) == rec(qwintro(a, b)) for every
/// S-node over the fragment classes.
inline RecHomReport check_rec_hom(QWState& st, const FiniteAlgebra& alg, const std::vector<ClassId>& fragment,
                                  std::size_t budget = 1u << 20) {
  std::vector<SNode<ClassId>> nodes;
  for_each_fragment_node(st, fragment, budget, [&](const SNode<ClassId>& s) {
    nodes.push_back(s);
    return true;
  });
  std::vector<ClassId> intros;
  for (const auto& s : nodes) intros.push_back(st.intro(s));
  st.saturate();
  Recursor rec(st, alg);
  RecHomReport out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Value lhs = alg(map_s([&](ClassId c) { return rec(c); }, nodes[i]));
    Value rhs = rec(intros[i]);
    ++out.checked;
    if (lhs != rhs) {
      out.ok = false;
      out.counterexample = nodes[i];
      out.lhs = lhs;
      out.rhs = rhs;
      return out;
    }
  }
  return out;
}

struct IndependenceReport {
  bool ok = true;
  std::optional<ClassId> cls;
  std::optional<ClassId> member;
  Value expected = 0;
  Value got = 0;
  std::size_t members_checked = 0;
};

/// Evaluating any member of a class gives the class's value.
inline IndependenceReport check_representative_independence(const QWState& st, const FiniteAlgebra& alg,
                                                             const std::vector<ClassId>& classes) {
  Recursor rec(st, alg);
  IndependenceReport out;
  for (ClassId c : classes) {
    Value want = rec(c);
    for (ClassId m : st.members(c)) {
      ++out.members_checked;
      Value got = rec.via(m);
      if (got != want) {
        out.ok = false;
        out.cls = c;
        out.member = m;
        out.expected = want;
        out.got = got;
        return out;
      }
    }
  }
  return out;
}

struct UniqReport {
  enum class Verdict { Ok, PremiseFailure, ConclusionFailure } verdict = Verdict::Ok;
  std::optional<SNode<ClassId>> premise_node;  // hom condition broken here
  std::optional<ClassId> mismatch;             // h(c) != rec(c) here
  Value h_value = 0;
  Value rec_value = 0;
};

inline const char* to_string(UniqReport::Verdict v) {
  switch (v) {
    case UniqReport::Verdict::Ok: return "ok";
    case UniqReport::Verdict::PremiseFailure: return "premise-failure";
    case UniqReport::Verdict::ConclusionFailure: return "conclusion-failure";
  }
  return "?";
}

/// qwuniq on a fragment. The premise is the hom condition for h, checked on
/// every S-node over the fragment whose introduction lands back in the
/// fragment; the conclusion is h == rec on the fragment.
inline UniqReport check_uniq(QWState& st, const RecTarget& target, const std::vector<ClassId>& fragment,
                             const std::function<Value(ClassId)>& h, std::size_t budget = 1u << 20) {
  validate_target(target, st.equations());
  std::map<std::uint32_t, ClassId> in_fragment;
  for (ClassId c : fragment) in_fragment.emplace(st.find(c).value, c);
  std::vector<SNode<ClassId>> nodes;
  for_each_fragment_node(st, fragment, budget, [&](const SNode<ClassId>& s) {
    nodes.push_back(s);
    return true;
  });
  std::vector<ClassId> intros;
  for (const auto& s : nodes) intros.push_back(st.intro(s));
  st.saturate();

  UniqReport out;
  const FiniteAlgebra& alg = target.algebra;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto it = in_fragment.find(st.find(intros[i]).value);
    if (it == in_fragment.end()) continue;
    Value lhs = alg(map_s([&](ClassId c) { return h(c); }, nodes[i]));
    if (lhs != h(it->second)) {
      out.verdict = UniqReport::Verdict::PremiseFailure;
      out.premise_node = nodes[i];
      out.h_value = h(it->second);
      out.rec_value = lhs;
      return out;
    }
  }
  Recursor rec(st, alg);
  for (ClassId c : fragment) {
    if (h(c) != rec(c)) {
      out.verdict = UniqReport::Verdict::ConclusionFailure;
      out.mismatch = c;
      out.h_value = h(c);
      out.rec_value = rec(c);
      return out;
    }
  }
  return out;
}

struct HomSearch {
  std::size_t maps_tried = 0;
  std::vector<std::vector<Value>> homomorphisms;  // each indexed like the fragment
};

/// Tries every map from the fragment into the carrier against the premise of
/// check_uniq and collects the ones that pass.
inline HomSearch search_homomorphisms(QWState& st, const RecTarget& target, const std::vector<ClassId>& fragment,
                                      std::size_t budget = 1u << 20) {
  validate_target(target, st.equations());
  std::size_t n = target.algebra.size();
  auto total = assignment_count(n, fragment.size(), budget);
  if (!total) fail(ErrorCode::BudgetExceeded, "too many maps from the fragment into the carrier");
  std::map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < fragment.size(); ++i) pos.emplace(st.find(fragment[i]).value, i);

  std::vector<SNode<ClassId>> nodes;
  for_each_fragment_node(st, fragment, budget, [&](const SNode<ClassId>& s) {
    nodes.push_back(s);
    return true;
  });
  std::vector<ClassId> intros;
  for (const auto& s : nodes) intros.push_back(st.intro(s));
  st.saturate();
  std::vector<std::pair<SNode<std::size_t>, std::size_t>> closed;  // nodes landing in the fragment
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto it = pos.find(st.find(intros[i]).value);
    if (it == pos.end()) continue;
    closed.emplace_back(map_s([&](ClassId c) { return pos.at(st.find(c).value); }, nodes[i]), it->second);
  }

  HomSearch out;
  std::vector<Value> h(fragment.size());
  for (std::size_t k = 0; k < *total; ++k) {
    FiniteAlgebra::decode(k, n, h);
    ++out.maps_tried;
    bool hom = true;
    for (const auto& [s, target_idx] : closed) {
      if (target.algebra(map_s([&](std::size_t i) { return h[i]; }, s)) != h[target_idx]) {
        hom = false;
        break;
      }
    }
    if (hom) out.homomorphisms.push_back(h);
  }
  return out;
}

struct QwequReport {
  bool ok = true;
  std::size_t instances = 0;
  std::size_t proved = 0;
  std::optional<std::string> failed_equation;
  std::vector<ClassId> failed_env;
};

/// qwequ on a fragment: for every equation and every environment into the
/// fragment, the two instantiated sides are Proved equal.
inline QwequReport check_qwequ(QWState& st, const std::vector<ClassId>& fragment, std::size_t budget = 1u << 20) {
  QwequReport out;
  const auto& sys = st.equations();
  std::vector<std::tuple<std::size_t, std::vector<ClassId>, ClassId, ClassId>> pending;
  for (std::size_t e : sys.name_order()) {
    const Equation& eq = sys.equations()[e];
    auto total = assignment_count(fragment.size(), eq.vars, budget);
    if (!total) fail(ErrorCode::BudgetExceeded, "too many environments for '" + eq.name + "'");
    std::vector<Value> idx(eq.vars);
    for (std::size_t k = 0; k < *total; ++k) {
      FiniteAlgebra::decode(k, fragment.size(), idx);
      std::vector<ClassId> env;
      for (Value i : idx) env.push_back(fragment[i]);
      auto rho = [&](VarIndex v) { return Payload::var(env[v]); };
      ClassId l = st.intern_layer(subst(eq.lhs, rho));
      ClassId r = st.intern_layer(subst(eq.rhs, rho));
      pending.emplace_back(e, std::move(env), l, r);
    }
  }
  for (const auto& [e, env, l, r] : pending) {
    ++out.instances;
    if (st.decide_eq(l, r).proved) {
      ++out.proved;
    } else if (out.ok) {
      out.ok = false;
      out.failed_equation = sys.equations()[e].name;
      out.failed_env = env;
    }
  }
  return out;
}

}  // namespace qwt
