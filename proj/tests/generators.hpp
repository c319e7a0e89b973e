#pragma once

#include <random>
#include <string>
#include <vector>

#include "qwt/qwt.hpp"

// Shared generators: small reference terms and random declarations.
namespace qwt::testing::gen {

inline Signature reference_signature() {
  Signature sig;
  sig.add("s", Arity::finite(1));
  sig.add("g", Arity::finite(2));
  return sig;
}

inline OpenTerm s(OpenTerm t) { return OpenTerm::node("s", BranchMap<OpenTerm>::finite({std::move(t)})); }
inline OpenTerm g(OpenTerm a, OpenTerm b) { return OpenTerm::node("g", BranchMap<OpenTerm>::finite({std::move(a), std::move(b)})); }
inline OpenTerm v(VarIndex i) { return OpenTerm::var(i); }

// All terms over {s, g} and variables {0, 1}, grouped by size.
inline std::vector<std::vector<OpenTerm>> reference_terms(std::size_t max_size) {
  std::vector<std::vector<OpenTerm>> by(max_size + 1);
  by[1] = {v(0), v(1)};
  for (std::size_t n = 2; n <= max_size; ++n) {
    for (const auto& t : by[n - 1]) by[n].push_back(s(t));
    for (std::size_t k = 1; k + 1 < n; ++k)
      for (const auto& a : by[k])
        for (const auto& b : by[n - 1 - k]) by[n].push_back(g(a, b));
  }
  return by;
}

inline std::vector<OpenTerm> flatten(const std::vector<std::vector<OpenTerm>>& by) {
  std::vector<OpenTerm> out;
  for (const auto& l : by) out.insert(out.end(), l.begin(), l.end());
  return out;
}

// Every substitution {0,1} -> pool.
inline std::vector<std::vector<OpenTerm>> substitutions(const std::vector<OpenTerm>& pool) {
  std::vector<std::vector<OpenTerm>> out;
  for (const auto& a : pool)
    for (const auto& b : pool) out.push_back({a, b});
  return out;
}

inline const char* kHeader = "with X = {a, b}\ndata T (X : Set) : Set where\n";

// Entries that keep T strictly positive and that the elaborator accepts.
inline std::string positive_entry(std::mt19937& rng, bool& used_omega, int& binder) {
  for (;;) {
    switch (rng() % 6) {
      case 0: return "X";
      case 1: return "T X";
      case 2: return "(t" + std::to_string(binder++) + " : T X)";
      case 3: return "(x" + std::to_string(binder++) + " : X)";
      case 4: return "(X -> T X)";
      case 5:
        if (used_omega) continue;
        used_omega = true;
        return "(Nat -> T X)";
    }
  }
}

// Function types whose domain mentions T.
inline std::string negative_entry(std::mt19937& rng) {
  static const std::vector<std::string> bad{
      "(T X -> T X)", "((T X -> X) -> T X)", "(T X * X -> T X)", "((Nat -> T X) -> T X)", "(T X -> X)",
      "(X * T X -> T X)", "((x : T X) -> T X)",
  };
  return bad[rng() % bad.size()];
}

struct Generated {
  std::string source;
  std::size_t element_ctors;
};

inline Generated conforming(std::mt19937& rng) {
  std::string src = kHeader;
  src += "  base : T X\n";
  std::size_t n = 1 + rng() % 3;
  int binder = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool omega = false;
    std::size_t len = 1 + rng() % 3;
    src += "  c" + std::to_string(i) + " : ";
    for (std::size_t k = 0; k < len; ++k) src += positive_entry(rng, omega, binder) + " -> ";
    src += "T X\n";
  }
  return {src, n + 1};
}

inline std::string mutated(std::mt19937& rng) {
  std::string src = kHeader;
  src += "  base : T X\n";
  std::size_t n = 1 + rng() % 3;
  std::size_t victim = rng() % n;
  int binder = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool omega = false;
    std::size_t len = 1 + rng() % 3;
    std::size_t slot = rng() % len;
    src += "  c" + std::to_string(i) + " : ";
    for (std::size_t k = 0; k < len; ++k)
      src += (i == victim && k == slot ? negative_entry(rng) : positive_entry(rng, omega, binder)) + " -> ";
    src += "T X\n";
  }
  return src;
}

}  // namespace qwt::testing::gen
