#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <string>
#include <vector>

#include "qwt/engine/qw_state.hpp"

namespace qwt {

struct ReplayReport {
  bool ok = true;
  std::size_t checked = 0;
  /// Index of the first merge that could not be re-derived.
  std::optional<std::size_t> failed_edge;
  std::string message;
};

/// Re-derives every merge of a state from scratch with its own union-find:
/// each record must be an instance of the rule it names, given only the
/// merges logged before it. Finally the rebuilt partition must coincide with
/// the engine's.
class ReplayValidator {
 public:
  explicit ReplayValidator(const QWState& state) : st_(state) {
    parent_.resize(state.node_count());
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  ReplayReport run() {
    ReplayReport rep;
    const auto& log = st_.merge_log();
    for (std::size_t i = 0; i < log.size(); ++i) {
      std::string why = check_record(log[i]);
      if (!why.empty()) {
        rep.ok = false;
        rep.failed_edge = i;
        rep.message = "edge " + std::to_string(i) + " (" + to_string(log[i].why.rule) + "): " + why;
        return rep;
      }
      unite(log[i].a.value, log[i].b.value);
      ++rep.checked;
    }
    // Partition agreement: same root iff same engine class.
    std::unordered_map<std::uint32_t, std::uint32_t> mine_to_engine;
    for (std::uint32_t n = 0; n < parent_.size(); ++n) {
      std::uint32_t mine = find(n);
      std::uint32_t theirs = st_.find(ClassId{n}).value;
      auto [it, fresh] = mine_to_engine.emplace(mine, theirs);
      if (!fresh && it->second != theirs) {
        rep.ok = false;
        rep.message = "replayed partition is coarser than the engine's at node " + std::to_string(n);
        return rep;
      }
    }
    std::unordered_map<std::uint32_t, std::uint32_t> engine_to_mine;
    for (const auto& [mine, theirs] : mine_to_engine) {
      auto [it, fresh] = engine_to_mine.emplace(theirs, mine);
      if (!fresh) {
        rep.ok = false;
        rep.message = "engine class " + std::to_string(theirs) + " has merges with no logged justification";
        return rep;
      }
    }
    return rep;
  }

  /// Checks that `steps` is a chain of logged edges from a to b.
  static bool check_derivation(const QWState& st, ClassId a, ClassId b, const std::vector<DerivationStep>& steps) {
    const auto& log = st.merge_log();
    ClassId at = a;
    for (const auto& s : steps) {
      if (s.edge >= log.size() || s.from != at) return false;
      const auto& e = log[s.edge];
      bool matches = (e.a == s.from && e.b == s.to) || (e.b == s.from && e.a == s.to);
      if (!matches) return false;
      at = s.to;
    }
    return at == b;
  }

 private:
  std::uint32_t find(std::uint32_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void unite(std::uint32_t a, std::uint32_t b) { parent_[find(a)] = find(b); }

  Payload canon(const Payload& p) {
    return subst(p, [&](const ClassId& c) { return Payload::var(ClassId{find(c.value)}); });
  }

  bool same(const Payload& x, const Payload& y) { return canon(x) == canon(y); }

  std::string check_record(const MergeRecord& r) {
    if (r.a.value >= parent_.size() || r.b.value >= parent_.size()) return "unknown node";
    if (find(r.a.value) == find(r.b.value)) return "endpoints were already equal";
    const Payload& pa = st_.payload(r.a);
    const Payload& pb = st_.payload(r.b);
    switch (r.why.rule) {
      case Rule::SqEq: {
        const auto& eqs = st_.equations().equations();
        if (r.why.equation >= eqs.size()) return "no such equation";
        const Equation& eq = eqs[r.why.equation];
        if (r.why.env.size() != eq.vars) return "environment has the wrong length";
        auto rho = [&](VarIndex v) { return Payload::var(r.why.env[v]); };
        Payload l = subst(eq.lhs, rho);
        Payload rr = subst(eq.rhs, rho);
        if ((same(pa, l) && same(pb, rr)) || (same(pa, rr) && same(pb, l))) return {};
        return "payloads are not the two sides of '" + eq.name + "' under the recorded environment";
      }
      case Rule::SqEta: {
        if (pa.is_var() && find(pa.var_value().value) == find(r.b.value)) return {};
        if (pb.is_var() && find(pb.var_value().value) == find(r.a.value)) return {};
        return "no eta payload over the other endpoint";
      }
      case Rule::SqSigma: {
        if (!r.why.children) return "missing children";
        const auto& ch = *r.why.children;
        if (pa.is_var() || pb.is_var() || pa.op() != pb.op()) return "operator mismatch";
        // a is the nested payload, b its one-layer flattening.
        const auto& nb = pa.branches();
        if (nb.is_omega() != ch.is_omega()) return "children do not cover the branches";
        auto carries = [&](const Payload& branch, const ClassId& kid) {
          if (branch.is_var()) return find(branch.var_value().value) == find(kid.value);
          return kid.value < parent_.size() && same(st_.payload(kid), branch);
        };
        bool ok = true;
        if (!nb.is_omega()) {
          if (nb.items().size() != ch.items().size()) return "children do not cover the branches";
          for (std::size_t i = 0; i < nb.items().size() && ok; ++i) ok = carries(nb.items()[i], ch.items()[i]);
        } else {
          std::size_t end = std::max(nb.extent(), ch.extent());
          for (std::size_t i = 0; i < end && ok; ++i) ok = carries(nb.at(i), ch.at(i));
          ok = ok && carries(nb.omega_rep().fallback, ch.omega_rep().fallback);
        }
        if (!ok) return "a child node does not carry its branch";
        if (!same(pb, iota(SNode<ClassId>{pa.op(), ch}))) return "flat endpoint is not iota of the children";
        return {};
      }
      case Rule::Cong:
        if (same(pa, pb)) return {};
        return "payloads are not congruent";
    }
    return "unknown rule";
  }

  const QWState& st_;
  std::vector<std::uint32_t> parent_;
};

inline ReplayReport replay(const QWState& state) { return ReplayValidator(state).run(); }

}  // namespace qwt
