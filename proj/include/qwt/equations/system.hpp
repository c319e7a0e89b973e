#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qwt/core/algebra.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/json_io.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

/// One named equation l == r over the variables 0..vars-1.
struct Equation {
  std::string name;
  VarIndex vars = 0;
  OpenTerm lhs;
  OpenTerm rhs;

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// A system of equations (E, V, l, r) together with the probe depth used to
/// truncate omega-indexed variable families.
class EquationSystem {
 public:
  EquationSystem() = default;
  EquationSystem(std::vector<Equation> eqs, std::size_t probe) : eqs_(std::move(eqs)), probe_(probe) {}

  const std::vector<Equation>& equations() const { return eqs_; }
  std::size_t probe() const { return probe_; }
  std::size_t size() const { return eqs_.size(); }
  bool empty() const { return eqs_.empty(); }

  const Equation& at(const std::string& name) const {
    for (const auto& e : eqs_)
      if (e.name == name) return e;
    fail(ErrorCode::InvalidArgument, "no equation named '" + name + "'");
  }

  /// Indices of the equations sorted by name.
  std::vector<std::size_t> name_order() const {
    std::vector<std::size_t> order(eqs_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eqs_[a].name < eqs_[b].name; });
    return order;
  }

  friend bool operator==(const EquationSystem&, const EquationSystem&) = default;

 private:
  std::vector<Equation> eqs_;
  std::size_t probe_ = 2;
};

/// Validates raw equations against a signature: operators must exist with
/// matching shapes, variables must be in range, names must be distinct.
inline EquationSystem make_system(const Signature& sig, std::vector<Equation> raw, std::size_t probe) {
  std::set<std::string> names;
  for (const auto& e : raw) {
    if (!names.insert(e.name).second) fail(ErrorCode::DuplicateName, "equation '" + e.name + "' declared twice");
    for (const OpenTerm* side : {&e.lhs, &e.rhs}) {
      check_term(sig, *side);
      for (VarIndex v : vars_of(*side))
        if (v >= e.vars)
          fail(ErrorCode::UnboundVariable,
               "equation '" + e.name + "' uses variable " + std::to_string(v) + " but declares " + std::to_string(e.vars));
    }
  }
  return EquationSystem(std::move(raw), probe);
}

inline Json to_json(const EquationSystem& sys) {
  Json eqs = Json::array();
  for (const auto& e : sys.equations()) {
    Json o = Json::object();
    o["name"] = e.name;
    o["vars"] = e.vars;
    o["lhs"] = to_json(e.lhs);
    o["rhs"] = to_json(e.rhs);
    eqs.push_back(std::move(o));
  }
  Json j = Json::object();
  j["eqs"] = std::move(eqs);
  j["probe"] = sys.probe();
  return j;
}

inline EquationSystem system_from_json(const Signature& sig, const Json& j) {
  try {
    std::vector<Equation> eqs;
    for (const auto& e : j.at("eqs"))
      eqs.push_back({e.at("name").get<std::string>(), e.at("vars").get<VarIndex>(), term_from_json(e.at("lhs")),
                     term_from_json(e.at("rhs"))});
    return make_system(sig, std::move(eqs), j.value("probe", std::size_t{2}));
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, std::string("equations: ") + e.what());
  }
}

/// Outcome of a satisfaction check.
struct SatReport {
  bool satisfied = true;
  std::string equation;
  std::vector<Value> env;
  Value lhs = 0;
  Value rhs = 0;
  /// Digest of the algebra and the system the verdict was computed on.
  std::string fingerprint;
};

inline std::string sat_fingerprint(const FiniteAlgebra& alg, const EquationSystem& sys) {
  return fingerprint(to_json(alg).dump() + "|" + to_json(sys).dump());
}

enum class EnvOrder { Lexicographic, Reversed };

/// Sat{eps} X: for every equation (in name order) and every environment
/// rho : V e -> X, (l e >>= rho) == (r e >>= rho). Reports the first
/// violation; environments are enumerated lexicographically with variable 0
/// most significant (or in the reverse of that order).
inline SatReport sat_check(const FiniteAlgebra& alg, const EquationSystem& sys, std::size_t budget = 1u << 22,
                           EnvOrder order = EnvOrder::Lexicographic) {
  std::size_t total = 0;
  for (const auto& e : sys.equations()) {
    auto n = assignment_count(alg.size(), e.vars, budget);
    if (!n || (total += *n) > budget)
      fail(ErrorCode::BudgetExceeded, "more than " + std::to_string(budget) + " environments to check");
  }
  SatReport report;
  report.fingerprint = sat_fingerprint(alg, sys);
  for (std::size_t idx : sys.name_order()) {
    const Equation& e = sys.equations()[idx];
    std::size_t n = *assignment_count(alg.size(), e.vars);
    std::vector<Value> env(e.vars);
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t k = order == EnvOrder::Lexicographic ? step : n - 1 - step;
      FiniteAlgebra::decode(k, alg.size(), env);
      auto lookup = [&](VarIndex v) { return env.at(v); };
      Value l = eval_alg(e.lhs, lookup, alg);
      Value r = eval_alg(e.rhs, lookup, alg);
      if (l != r) {
        report.satisfied = false;
        report.equation = e.name;
        report.env = env;
        report.lhs = l;
        report.rhs = r;
        return report;
      }
    }
  }
  return report;
}

inline Json to_json(const SatReport& r, const FiniteAlgebra* alg = nullptr) {
  Json j = Json::object();
  j["verdict"] = r.satisfied ? "satisfied" : "violated";
  if (!r.satisfied) {
    j["equation"] = r.equation;
    Json env = Json::array();
    for (Value v : r.env) env.push_back(alg ? Json(alg->label(v)) : Json(v));
    j["env"] = std::move(env);
    j["lhs"] = alg ? Json(alg->label(r.lhs)) : Json(r.lhs);
    j["rhs"] = alg ? Json(alg->label(r.rhs)) : Json(r.rhs);
  }
  j["fingerprint"] = r.fingerprint;
  return j;
}

}  // namespace qwt
