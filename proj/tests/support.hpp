#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qwt/qwt.hpp"

namespace qwt::testing {

inline std::string fixture_path(const std::string& name) { return std::string(QWT_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// x1 :: x2 :: ... :: [] in the elaborated Bag signature.
inline OpenTerm list_term(const std::vector<std::string>& xs) {
  OpenTerm t = OpenTerm::constant("nil");
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    t = OpenTerm::node("cons[" + *it + "]", BranchMap<OpenTerm>::finite({t}));
  return t;
}

/// Every list over `alphabet` with at most `max_len` elements, shortest first.
inline std::vector<std::vector<std::string>> all_lists(const std::vector<std::string>& alphabet, std::size_t max_len) {
  std::vector<std::vector<std::string>> out{{}};
  std::vector<std::vector<std::string>> layer{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& l : layer)
      for (const auto& x : alphabet) {
        auto m = l;
        m.push_back(x);
        next.push_back(m);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// Multiset oracle written against the raw term: walk the spine, collect labels.
inline std::map<std::string, int> spine_counts(const OpenTerm& t) {
  std::map<std::string, int> out;
  const OpenTerm* at = &t;
  while (!at->is_var() && at->op() != "nil") {
    const std::string& op = at->op();
    out[op.substr(op.find('[') + 1, op.size() - op.find('[') - 2)]++;
    at = &at->branches().items().at(0);
  }
  return out;
}

inline std::map<std::string, int> list_counts(const std::vector<std::string>& xs) {
  std::map<std::string, int> out;
  for (const auto& x : xs) out[x]++;
  return out;
}

/// Length algebra on {0..cap}: nil -> 0, cons[x] -> min(n + 1, cap).
inline FiniteAlgebra length_algebra(const Signature& sig, std::size_t cap) {
  return FiniteAlgebra::tabulate(sig, cap + 1, 2, [cap](const std::string& op, const std::vector<Value>& a) -> Value {
    if (op == "nil") return 0;
    return std::min<Value>(a.at(0) + 1, cap);
  });
}

inline const char* kBagSource =
    "with X = {a, b}\n"
    "data Bag (X : Set) : Set where\n"
    "  nil  : Bag X\n"
    "  cons : X -> Bag X -> Bag X\n"
    "  swap : (x y : X) (ys : Bag X) -> x :: y :: ys == y :: x :: ys\n";

}  // namespace qwt::testing
