#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qwt/core/enumerate.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"
#include "qwt/equations/system.hpp"
#include "qwt/schema/translate.hpp"

namespace qwt {

/// Identifies an interned carrier element. Every intern step creates a fresh
/// id; ids that were later merged stay valid and denote the merged class.
struct ClassId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

}  // namespace qwt

template <>
struct std::hash<qwt::ClassId> {
  std::size_t operator()(const qwt::ClassId& c) const noexcept { return std::hash<std::uint32_t>{}(c.value); }
};

namespace qwt {

/// The payload of sq: a T-layer whose leaves are earlier classes.
using Payload = Term<ClassId>;

enum class Rule { SqEq, SqEta, SqSigma, Cong };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::SqEq: return "sqeq";
    case Rule::SqEta: return "sqeta";
    case Rule::SqSigma: return "sqsigma";
    case Rule::Cong: return "cong";
  }
  return "?";
}

struct Justification {
  Rule rule = Rule::Cong;
  /// SqEq: index of the equation and the environment, one class per variable.
  std::size_t equation = 0;
  std::vector<ClassId> env;
  /// SqSigma: for each branch of the nested payload, the class interned for it.
  std::optional<BranchMap<ClassId>> children;
};

/// One edge of the proof forest: nodes `a` and `b` were identified because of `why`.
struct MergeRecord {
  ClassId a;
  ClassId b;
  Justification why;
};

struct DerivationStep {
  ClassId from;
  ClassId to;
  std::size_t edge = 0;  // index into merge_log()
};

struct Bounds {
  std::size_t max_rounds = 32;
  std::size_t max_nodes = 200000;
  std::size_t max_instances_per_round = 1000000;
};

enum class Saturation { FixpointReached, BudgetExhausted };

inline const char* to_string(Saturation s) {
  return s == Saturation::FixpointReached ? "fixpoint" : "budget-exhausted";
}

struct EqDecision {
  bool proved = false;
  /// Path through the proof forest from the first to the second argument.
  std::vector<DerivationStep> derivation;
  /// Set when the last saturation stopped on its budget.
  bool budget_exhausted = false;
};

struct EnumeratedClass {
  ClassId id;
  OpenTerm representative;
  std::size_t stage = 0;
};

struct Enumeration {
  std::vector<EnumeratedClass> classes;
  Saturation status = Saturation::FixpointReached;
};

/// Staged quotient of interned terms.
///
/// Each node is sq(t) for a payload t whose leaves are earlier classes. The
/// union-find identifies nodes related by the generators
///   sqeq    sq(T'rho (l e)) ~ sq(T'rho (r e))
///   sqeta   sq(eta c) ~ c
///   sqsigma sq(sigma s) ~ sq(iota(S'(qu . sq) s))
/// and by congruence (equal payloads up to the current classes). Nested
/// payloads are flattened eagerly, so every class built from operators holds
/// a depth-one node. The stage of a node is one more than the largest stage
/// among its leaves; the stage of a class is the minimum over its members.
class QWState {
 public:
  QWState(const Signature& sig, const EquationSystem& sys, Bounds bounds = {},
          std::vector<std::string> generators = {})
      : bounds_(bounds), generators_(std::move(generators)) {
    Theory t = freeify(sig, sys, generators_);
    sig_ = std::move(t.signature);
    sys_ = std::move(t.equations);
  }

  const Signature& signature() const { return sig_; }
  const EquationSystem& equations() const { return sys_; }
  const std::vector<std::string>& generators() const { return generators_; }
  const Bounds& bounds() const { return bounds_; }
  std::size_t probe() const { return sys_.probe(); }
  bool free_mode() const { return !generators_.empty(); }

  std::size_t node_count() const { return nodes_.size(); }
  const Payload& payload(ClassId id) const { return nodes_.at(check(id)).payload; }
  std::size_t node_stage(ClassId id) const { return nodes_.at(check(id)).stage; }
  const std::vector<MergeRecord>& merge_log() const { return log_; }
  std::size_t union_count() const { return log_.size(); }

  ClassId find(ClassId id) const { return ClassId{root(check(id))}; }
  bool same_class(ClassId a, ClassId b) const { return root(check(a)) == root(check(b)); }

  std::vector<ClassId> members(ClassId id) const {
    std::vector<ClassId> out;
    for (auto n : members_[root(check(id))]) out.push_back(ClassId{n});
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Live classes, by root id.
  std::vector<ClassId> classes() const {
    std::vector<ClassId> out;
    for (std::uint32_t i = 0; i < nodes_.size(); ++i)
      if (parent_[i] == i) out.push_back(ClassId{i});
    return out;
  }

  /// Interns a closed term (generators may appear as nullary operators).
  ClassId intern(const OpenTerm& t) {
    check_term(sig_, t);
    if (!is_closed(t)) fail(ErrorCode::UnboundVariable, "only closed terms can be interned");
    Payload p = subst(t, [](VarIndex) -> Payload { fail(ErrorCode::UnboundVariable, "open term"); });
    ClassId c = intern_payload(p);
    rebuild();
    return find(c);
  }

  /// Interns a term whose variables name generators.
  ClassId intern(const Term<std::string>& t) {
    OpenTerm closed = subst(t, [&](const std::string& g) {
      if (std::find(generators_.begin(), generators_.end(), g) == generators_.end())
        fail(ErrorCode::UnboundVariable, "'" + g + "' is not a generator");
      return OpenTerm::constant(g);
    });
    return intern(closed);
  }

  /// qwintro = qu . sq . iota
  ClassId intro(const SNode<ClassId>& s) {
    const Arity& a = sig_.arity(s.op);
    if (!s.branches.fits(a)) fail(ErrorCode::ArityMismatch, "operator '" + s.op + "' applied with the wrong shape");
    s.branches.for_each([&](const ClassId& c) { check(c); });
    ClassId c = intern_payload(iota(s));
    rebuild();
    return find(c);
  }

  /// Interns an arbitrary payload (a T-layer over existing classes).
  ClassId intern_layer(const Payload& p) {
    check_payload(p);
    ClassId c = intern_payload(p);
    rebuild();
    return find(c);
  }

  std::size_t stage_of(ClassId c) const { return class_stage_[root(check(c))]; }

  /// phi0: raising the stage of an element keeps its representation.
  ClassId coerce(ClassId c, std::size_t stage) const {
    if (stage < stage_of(c))
      fail(ErrorCode::InvalidArgument, "coercion target stage " + std::to_string(stage) + " is below the class stage " +
                                           std::to_string(stage_of(c)));
    return c;
  }

  /// Runs equation instantiation and congruence closure to a fixpoint or
  /// until the budget runs out. With a stage cutoff, only instances whose
  /// nodes would sit at stage <= cutoff are used.
  Saturation saturate(std::optional<std::size_t> stage_cutoff = std::nullopt) {
    rebuild();
    last_ = Saturation::BudgetExhausted;
    for (std::size_t round = 0; round < bounds_.max_rounds; ++round) {
      std::size_t nodes_before = nodes_.size();
      std::size_t unions_before = log_.size();
      auto instances = collect_instances(stage_cutoff);
      if (!instances) break;
      for (const auto& [e, env] : *instances) {
        if (nodes_.size() > bounds_.max_nodes) break;
        apply_instance(e, env);
        rebuild();
      }
      rebuild();
      if (nodes_.size() > bounds_.max_nodes) break;
      if (nodes_.size() == nodes_before && log_.size() == unions_before) {
        last_ = Saturation::FixpointReached;
        break;
      }
    }
    stale_ = false;
    return last_;
  }

  std::optional<Saturation> last_saturation() const { return stale_ ? std::nullopt : std::optional(last_); }
  bool stale() const { return stale_; }

  /// Proved iff the two classes are identified; the derivation is the path
  /// between them in the proof forest. Unknown never claims distinctness.
  EqDecision decide_eq(ClassId a, ClassId b) {
    check(a);
    check(b);
    if (stale_) saturate();
    EqDecision d;
    d.budget_exhausted = last_ == Saturation::BudgetExhausted;
    if (!same_class(a, b)) return d;
    d.proved = true;
    d.derivation = forest_path(a.value, b.value);
    return d;
  }

  /// Interns every closed term of size <= bound, saturates, and returns one
  /// representative per class reached (its least member in canonical order).
  Enumeration enumerate(std::size_t size_bound) {
    auto terms = closed_terms_up_to(sig_, size_bound, probe(), bounds_.max_nodes);
    std::vector<ClassId> ids;
    for (const auto& t : terms) ids.push_back(intern(t));
    Enumeration out;
    out.status = saturate();
    std::set<std::uint32_t> seen;
    for (ClassId id : ids) {
      std::uint32_t r = root(id.value);
      if (!seen.insert(r).second) continue;
      out.classes.push_back({ClassId{r}, representative(ClassId{r}), class_stage_[r]});
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const auto& x, const auto& y) { return x.representative < y.representative; });
    return out;
  }

  /// The least closed term of the class under the canonical order.
  OpenTerm representative(ClassId c) {
    refresh_best();
    auto it = best_.find(root(check(c)));
    if (it == best_.end()) fail(ErrorCode::InvalidArgument, "class has no closed representative");
    return it->second;
  }

  /// A member of least stage (ties broken by id). Its leaves all sit at
  /// strictly smaller stages, which makes recursion over it well founded.
  ClassId min_stage_member(ClassId c) const {
    std::uint32_t r = root(check(c));
    std::uint32_t best = r;
    bool have = false;
    for (auto n : members_[r]) {
      if (!have || nodes_[n].stage < nodes_[best].stage || (nodes_[n].stage == nodes_[best].stage && n < best)) {
        best = n;
        have = true;
      }
    }
    return ClassId{best};
  }

 private:
  struct Node {
    Payload payload;  // as interned; leaves are the roots at creation time
    std::size_t stage = 1;
    bool flat = false;
  };

  std::uint32_t check(ClassId id) const {
    if (id.value >= nodes_.size()) fail(ErrorCode::StaleClass, "class id " + std::to_string(id.value) + " is not live in this state");
    return id.value;
  }

  void check_payload(const Payload& p) const {
    if (p.is_var()) {
      check(p.var_value());
      return;
    }
    if (!p.branches().fits(sig_.arity(p.op())))
      fail(ErrorCode::ArityMismatch, "operator '" + p.op() + "' applied with the wrong shape");
    p.branches().for_each([&](const Payload& c) { check_payload(c); });
  }

  std::uint32_t root(std::uint32_t i) const {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  Payload canonical(const Payload& p) const {
    return subst(p, [&](const ClassId& c) { return Payload::var(ClassId{root(c.value)}); });
  }

  static bool is_flat(const Payload& p) {
    if (p.is_var()) return false;
    bool flat = true;
    p.branches().for_each([&](const Payload& c) { flat = flat && c.is_var(); });
    return flat;
  }

  ClassId intern_payload(const Payload& raw) {
    Payload key = canonical(raw);
    if (auto it = table_.find(key); it != table_.end()) return it->second;

    auto id = static_cast<std::uint32_t>(nodes_.size());
    std::size_t stage = 1;
    std::set<std::uint32_t> leaf_roots;
    collect_leaf_roots(key, leaf_roots);
    for (auto r : leaf_roots) stage = std::max(stage, class_stage_[r] + 1);

    nodes_.push_back({key, stage, is_flat(key)});
    parent_.push_back(id);
    class_stage_.push_back(stage);
    members_.push_back({id});
    users_.emplace_back();
    adj_.emplace_back();
    canon_.push_back(key);
    table_.emplace(key, ClassId{id});
    for (auto r : leaf_roots) users_[r].push_back(id);
    if (nodes_[id].flat) by_op_[key.op()].push_back(id);
    stale_ = true;
    best_valid_ = false;

    if (key.is_var()) {
      unite(id, key.var_value().value, {Rule::SqEta, 0, {}, std::nullopt});
    } else if (!nodes_[id].flat) {
      // A leaf branch eta(c) is already c (sqeta); only operator branches need a node.
      BranchMap<ClassId> children = key.branches().map(
          [&](const Payload& b) { return b.is_var() ? b.var_value() : intern_payload(b); });
      Payload flat = canonical(Payload::node(key.op(), children.map([](const ClassId& c) { return Payload::var(c); })));
      ClassId f = intern_payload(flat);
      unite(id, f.value, {Rule::SqSigma, 0, {}, children});
    }
    return ClassId{id};
  }

  static void collect_leaf_roots(const Payload& p, std::set<std::uint32_t>& out) {
    if (p.is_var()) {
      out.insert(p.var_value().value);
      return;
    }
    p.branches().for_each([&](const Payload& c) { collect_leaf_roots(c, out); });
  }

  bool unite(std::uint32_t a, std::uint32_t b, Justification why) {
    std::uint32_t ra = root(a), rb = root(b);
    if (ra == rb) return false;
    std::size_t edge = log_.size();
    log_.push_back({ClassId{a}, ClassId{b}, std::move(why)});
    adj_[a].push_back({b, edge});
    adj_[b].push_back({a, edge});
    if (members_[ra].size() > members_[rb].size()) std::swap(ra, rb);
    parent_[ra] = rb;
    class_stage_[rb] = std::min(class_stage_[rb], class_stage_[ra]);
    members_[rb].insert(members_[rb].end(), members_[ra].begin(), members_[ra].end());
    members_[ra].clear();
    pending_.insert(pending_.end(), users_[ra].begin(), users_[ra].end());
    users_[rb].insert(users_[rb].end(), users_[ra].begin(), users_[ra].end());
    users_[ra].clear();
    best_valid_ = false;
    return true;
  }

  /// Restores the hashcons invariant after merges; colliding payloads are
  /// congruent and get merged.
  void rebuild() {
    while (!pending_.empty()) {
      std::vector<std::uint32_t> work;
      work.swap(pending_);
      std::sort(work.begin(), work.end());
      work.erase(std::unique(work.begin(), work.end()), work.end());
      for (auto id : work) {
        Payload key = canonical(canon_[id]);
        if (key == canon_[id]) continue;
        if (auto it = table_.find(canon_[id]); it != table_.end() && it->second.value == id) table_.erase(it);
        canon_[id] = key;
        auto [it, inserted] = table_.emplace(key, ClassId{id});
        if (!inserted) unite(it->second.value, id, {Rule::Cong, 0, {}, std::nullopt});
      }
    }
  }

  using Binding = std::vector<std::optional<std::uint32_t>>;

  void match_class(const OpenTerm& pat, std::uint32_t cls, const Binding& in, std::vector<Binding>& out) const {
    if (pat.is_var()) {
      auto& slot = in[pat.var_value()];
      if (!slot) {
        Binding b = in;
        b[pat.var_value()] = cls;
        out.push_back(std::move(b));
      } else if (root(*slot) == cls) {
        out.push_back(in);
      }
      return;
    }
    for (auto n : members_[cls]) {
      if (!nodes_[n].flat) continue;
      match_node(pat, n, in, out);
    }
  }

  void match_node(const OpenTerm& pat, std::uint32_t n, const Binding& in, std::vector<Binding>& out) const {
    const Payload& key = canon_[n];
    if (key.op() != pat.op() || key.branches().is_omega() != pat.branches().is_omega()) return;
    const auto& pb = pat.branches();
    const auto& nb = key.branches();
    std::vector<Binding> cur{in};
    auto step = [&](const OpenTerm& p, const Payload& leaf) {
      std::vector<Binding> next;
      for (const auto& b : cur) match_class(p, root(leaf.var_value().value), b, next);
      cur.swap(next);
    };
    if (!pb.is_omega()) {
      if (pb.items().size() != nb.items().size()) return;
      for (std::size_t i = 0; i < pb.items().size() && !cur.empty(); ++i) step(pb.items()[i], nb.items()[i]);
    } else {
      std::size_t end = std::max(pb.extent(), nb.extent());
      for (std::size_t i = 0; i < end && !cur.empty(); ++i) step(pb.at(i), nb.at(i));
      if (!cur.empty()) step(pb.omega_rep().fallback, nb.omega_rep().fallback);
    }
    out.insert(out.end(), cur.begin(), cur.end());
  }

  using Instance = std::pair<std::size_t, std::vector<std::uint32_t>>;

  /// Environments into existing classes for which one side of the equation
  /// already occurs (or every environment, for equations whose sides are
  /// both variables or closed). Variables bound by neither match are ranged
  /// over all classes.
  std::optional<std::vector<Instance>> collect_instances(std::optional<std::size_t> cutoff) {
    std::vector<Instance> out;
    std::set<Instance> seen;
    std::vector<std::uint32_t> roots;
    for (auto c : classes()) roots.push_back(c.value);

    for (std::size_t e : sys_.name_order()) {
      const Equation& eq = sys_.equations()[e];
      std::set<VarIndex> used = vars_of(eq.lhs);
      for (auto v : vars_of(eq.rhs)) used.insert(v);

      std::vector<Binding> partial;
      Binding empty(eq.vars);
      bool matched_side = false;
      for (const OpenTerm* side : {&eq.lhs, &eq.rhs}) {
        if (side->is_var() || is_closed(*side)) continue;
        matched_side = true;
        auto it = by_op_.find(side->op());
        if (it == by_op_.end()) continue;
        for (auto n : it->second) match_node(*side, n, empty, partial);
      }
      if (!matched_side) partial.push_back(empty);

      for (const auto& b : partial) {
        std::vector<VarIndex> open;
        for (VarIndex v = 0; v < eq.vars; ++v)
          if (!b[v]) open.push_back(v);
        if (!open.empty() && roots.empty()) continue;
        std::vector<std::uint32_t> env(eq.vars);
        for (VarIndex v = 0; v < eq.vars; ++v)
          if (b[v]) env[v] = root(*b[v]);
        // Unused variables get the first class; used ones range over all.
        std::vector<VarIndex> ranging;
        for (auto v : open) {
          if (used.count(v))
            ranging.push_back(v);
          else
            env[v] = roots.front();
        }
        auto total = assignment_count(roots.size(), ranging.size(), bounds_.max_instances_per_round);
        if (!total) return std::nullopt;
        std::vector<Value> pick(ranging.size());
        for (std::size_t k = 0; k < *total; ++k) {
          FiniteAlgebra::decode(k, roots.size(), pick);
          for (std::size_t j = 0; j < ranging.size(); ++j) env[ranging[j]] = roots[pick[j]];
          if (cutoff) {
            std::size_t stage = 1;
            for (auto v : used) stage = std::max(stage, class_stage_[env[v]] + 1);
            if (stage > *cutoff) continue;
          }
          Instance inst{e, env};
          if (seen.insert(inst).second) out.push_back(std::move(inst));
          if (out.size() > bounds_.max_instances_per_round) return std::nullopt;
        }
      }
    }
    return out;
  }

  void apply_instance(std::size_t e, const std::vector<std::uint32_t>& env) {
    const Equation& eq = sys_.equations()[e];
    auto rho = [&](VarIndex v) { return Payload::var(ClassId{env[v]}); };
    ClassId l = intern_payload(subst(eq.lhs, rho));
    ClassId r = intern_payload(subst(eq.rhs, rho));
    Justification why{Rule::SqEq, e, {}, std::nullopt};
    for (auto c : env) why.env.push_back(ClassId{c});
    unite(l.value, r.value, std::move(why));
  }

  std::vector<DerivationStep> forest_path(std::uint32_t from, std::uint32_t to) const {
    if (from == to) return {};
    std::unordered_map<std::uint32_t, std::pair<std::uint32_t, std::size_t>> prev;
    std::deque<std::uint32_t> queue{from};
    prev[from] = {from, SIZE_MAX};
    while (!queue.empty()) {
      auto n = queue.front();
      queue.pop_front();
      if (n == to) break;
      for (const auto& [m, edge] : adj_[n])
        if (!prev.count(m)) {
          prev[m] = {n, edge};
          queue.push_back(m);
        }
    }
    std::vector<DerivationStep> path;
    for (auto n = to; n != from;) {
      auto [p, edge] = prev.at(n);
      path.push_back({ClassId{p}, ClassId{n}, edge});
      n = p;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  void refresh_best() {
    if (best_valid_) return;
    best_.clear();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t n = 0; n < nodes_.size(); ++n) {
        if (!nodes_[n].flat) continue;
        const Payload& key = canon_[n];
        bool ready = true;
        key.branches().for_each([&](const Payload& c) { ready = ready && best_.count(root(c.var_value().value)); });
        if (!ready) continue;
        OpenTerm cand = OpenTerm::node(
            key.op(), key.branches().map([&](const Payload& c) { return best_.at(root(c.var_value().value)); }));
        std::uint32_t r = root(n);
        auto it = best_.find(r);
        if (it == best_.end()) {
          best_.emplace(r, cand);
          changed = true;
        } else if (cand < it->second) {
          it->second = cand;
          changed = true;
        }
      }
    }
    best_valid_ = true;
  }

  Signature sig_;
  EquationSystem sys_;
  Bounds bounds_;
  std::vector<std::string> generators_;

  std::vector<Node> nodes_;
  mutable std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> class_stage_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::vector<std::uint32_t>> users_;
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj_;
  std::vector<Payload> canon_;
  std::unordered_map<Payload, ClassId, TermHash<ClassId>> table_;
  std::map<std::string, std::vector<std::uint32_t>> by_op_;
  std::vector<std::uint32_t> pending_;
  std::vector<MergeRecord> log_;

  std::unordered_map<std::uint32_t, OpenTerm> best_;
  bool best_valid_ = false;
  bool stale_ = false;
  Saturation last_ = Saturation::FixpointReached;
};

}  // namespace qwt
