#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qwt/core/algebra.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

using Json = nlohmann::ordered_json;

inline Json to_json(const Arity& a) {
  Json j = Json::object();
  if (a.is_omega())
    j["omega"] = true;
  else
    j["finite"] = a.count();
  return j;
}

inline Json to_json(const Signature& sig) {
  Json ops = Json::array();
  for (const auto& op : sig.ops()) {
    Json o = Json::object();
    o["name"] = op.name;
    o["arity"] = to_json(op.arity);
    ops.push_back(std::move(o));
  }
  Json j = Json::object();
  j["ops"] = std::move(ops);
  return j;
}

namespace detail {
template <class X, class LeafOut>
Json term_to_json(const Term<X>& t, LeafOut&& leaf) {
  Json j = Json::object();
  if (t.is_var()) {
    j["var"] = leaf(t.var_value());
    return j;
  }
  j["op"] = t.op();
  const auto& b = t.branches();
  if (!b.is_omega()) {
    Json arr = Json::array();
    for (const auto& c : b.items()) arr.push_back(term_to_json(c, leaf));
    j["branches"] = std::move(arr);
  } else {
    Json table = Json::array();
    for (const auto& [i, c] : b.omega_rep().table) table.push_back(Json::array({i, term_to_json(c, leaf)}));
    Json om = Json::object();
    om["table"] = std::move(table);
    om["default"] = term_to_json(b.omega_rep().fallback, leaf);
    j["branches"] = std::move(om);
  }
  return j;
}
}  // namespace detail

template <class X>
Json to_json(const Term<X>& t) {
  return detail::term_to_json(t, [](const X& x) { return x; });
}

inline Arity arity_from_json(const Json& j) {
  if (j.contains("omega") && j.at("omega").get<bool>()) return Arity::omega();
  if (j.contains("finite")) return Arity::finite(j.at("finite").get<std::size_t>());
  fail(ErrorCode::Json, "arity must be {\"finite\":n} or {\"omega\":true}");
}

inline Signature signature_from_json(const Json& j) {
  try {
    Signature sig;
    for (const auto& op : j.at("ops")) sig.add(op.at("name").get<std::string>(), arity_from_json(op.at("arity")));
    return sig;
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, std::string("signature: ") + e.what());
  }
}

inline OpenTerm term_from_json(const Json& j) {
  try {
    if (j.contains("var")) return OpenTerm::var(j.at("var").get<VarIndex>());
    std::string op = j.at("op").get<std::string>();
    const Json& b = j.at("branches");
    if (b.is_array()) {
      std::vector<OpenTerm> items;
      for (const auto& c : b) items.push_back(term_from_json(c));
      return OpenTerm::node(std::move(op), BranchMap<OpenTerm>::finite(std::move(items)));
    }
    std::vector<std::pair<std::size_t, OpenTerm>> table;
    for (const auto& e : b.at("table")) table.emplace_back(e.at(0).get<std::size_t>(), term_from_json(e.at(1)));
    return OpenTerm::node(std::move(op), BranchMap<OpenTerm>::omega(std::move(table), term_from_json(b.at("default"))));
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, std::string("term: ") + e.what());
  }
}

inline Json to_json(const FiniteAlgebra& alg) {
  Json j = Json::object();
  j["carrier"] = alg.size();
  if (!alg.labels().empty()) j["labels"] = alg.labels();
  j["probe"] = alg.probe();
  Json ops = Json::object();
  for (std::size_t i = 0; i < alg.signature().size(); ++i) ops[alg.signature().ops()[i].name] = alg.tables()[i];
  j["tables"] = std::move(ops);
  return j;
}

/// Reads an algebra over a known signature; tables are keyed by operator name.
inline FiniteAlgebra algebra_from_json(const Signature& sig, const Json& j) {
  try {
    std::vector<std::vector<Value>> tables;
    for (const auto& op : sig.ops()) {
      if (!j.at("tables").contains(op.name)) fail(ErrorCode::Json, "algebra has no table for '" + op.name + "'");
      tables.push_back(j.at("tables").at(op.name).get<std::vector<Value>>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return FiniteAlgebra(sig, j.at("carrier").get<std::size_t>(), j.value("probe", std::size_t{0}), std::move(tables),
                         std::move(labels));
  } catch (const Json::exception& e) {
    fail(ErrorCode::Json, std::string("algebra: ") + e.what());
  }
}

/// Stable 64-bit FNV-1a digest, used to bind proofs to the data they were
/// computed from.
inline std::string fingerprint(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

}  // namespace qwt
