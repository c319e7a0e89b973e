#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qwt/core/branch_map.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

/// Carrier elements of a finite algebra are 0..size-1.
using Value = std::uint32_t;

/// Number of branch assignments over a carrier of the given size, or nullopt
/// when it overflows the limit.
inline std::optional<std::size_t> assignment_count(std::size_t carrier, std::size_t slots,
                                                   std::size_t limit = SIZE_MAX) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < slots; ++i) {
    if (carrier != 0 && n > limit / carrier) return std::nullopt;
    n *= carrier;
  }
  return n;
}

/// Number of argument slots an operator exposes to a finite algebra: the
/// arity for finite operators, probe + 1 (values at 0..probe-1 and the
/// default) for omega operators.
inline std::size_t slot_count(const Arity& a, std::size_t probe) {
  return a.is_omega() ? probe + 1 : a.count();
}

/// Builds the branch map described by a slot vector (see slot_count).
template <class T>
BranchMap<T> branches_from_slots(const Arity& a, const std::vector<T>& slots) {
  if (a.is_finite()) return BranchMap<T>::finite(slots);
  std::vector<std::pair<std::size_t, T>> table;
  for (std::size_t i = 0; i + 1 < slots.size(); ++i) table.emplace_back(i, slots[i]);
  return BranchMap<T>::omega(std::move(table), slots.back());
}

/// A finite S-algebra: carrier {0..size-1} and an operation table per
/// operator. Omega operators are tabulated on their values at indices below
/// the probe depth plus the default, so every table/default encoding of the
/// same branch function (restricted to the probe) lands on one entry.
class FiniteAlgebra {
 public:
  FiniteAlgebra() = default;

  FiniteAlgebra(Signature sig, std::size_t size, std::size_t probe, std::vector<std::vector<Value>> tables,
                std::vector<std::string> labels = {})
      : sig_(std::move(sig)), size_(size), probe_(probe), tables_(std::move(tables)), labels_(std::move(labels)) {
    if (tables_.size() != sig_.size()) fail(ErrorCode::InvalidArgument, "one table per operator required");
    for (std::size_t i = 0; i < sig_.size(); ++i) {
      auto want = assignment_count(size_, slot_count(sig_.ops()[i].arity, probe_));
      if (!want || tables_[i].size() != *want)
        fail(ErrorCode::InvalidArgument, "table for '" + sig_.ops()[i].name + "' has the wrong size");
      for (Value v : tables_[i])
        if (v >= size_) fail(ErrorCode::InvalidArgument, "table value outside the carrier");
    }
    if (!labels_.empty() && labels_.size() != size_) fail(ErrorCode::InvalidArgument, "label count != carrier size");
  }

  /// Tabulates an interpretation given as a function of (operator, slots).
  static FiniteAlgebra tabulate(const Signature& sig, std::size_t size, std::size_t probe,
                                const std::function<Value(const std::string&, const std::vector<Value>&)>& fn,
                                std::vector<std::string> labels = {}) {
    std::vector<std::vector<Value>> tables;
    for (const auto& op : sig.ops()) {
      std::size_t slots = slot_count(op.arity, probe);
      auto count = assignment_count(size, slots, 1u << 24);
      if (!count) fail(ErrorCode::BudgetExceeded, "operation table for '" + op.name + "' too large");
      std::vector<Value> table(*count);
      std::vector<Value> args(slots, 0);
      for (std::size_t k = 0; k < *count; ++k) {
        decode(k, size, args);
        table[k] = fn(op.name, args);
        if (table[k] >= size) fail(ErrorCode::InvalidArgument, "interpretation leaves the carrier");
      }
      tables.push_back(std::move(table));
    }
    return FiniteAlgebra(sig, size, probe, std::move(tables), std::move(labels));
  }

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return size_; }
  std::size_t probe() const { return probe_; }
  const std::vector<std::vector<Value>>& tables() const { return tables_; }
  std::vector<std::vector<Value>>& mutable_tables() { return tables_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::string label(Value v) const { return labels_.empty() ? std::to_string(v) : labels_.at(v); }

  /// Interpretation s : S Y -> Y.
  Value operator()(const SNode<Value>& s) const {
    auto idx = sig_.index_of(s.op);
    if (!idx) fail(ErrorCode::UnknownOperator, "'" + s.op + "' is not interpreted");
    const Arity& a = sig_.ops()[*idx].arity;
    if (!s.branches.fits(a)) fail(ErrorCode::ArityMismatch, "operator '" + s.op + "' applied with the wrong shape");
    std::size_t slots = slot_count(a, probe_);
    std::size_t k = 0;
    if (a.is_omega() && s.branches.extent() > probe_)
      fail(ErrorCode::ProbeExceeded, "branch table of '" + s.op + "' extends past probe depth " + std::to_string(probe_));
    for (std::size_t i = 0; i < slots; ++i) {
      Value v = (a.is_omega() && i == probe_) ? s.branches.omega_rep().fallback : s.branches.at(i);
      if (v >= size_) fail(ErrorCode::InvalidArgument, "branch value outside the carrier");
      k = k * size_ + v;
    }
    return tables_[*idx][k];
  }

  Value apply(const std::string& op, const std::vector<Value>& slots) const {
    auto idx = sig_.index_of(op);
    if (!idx) fail(ErrorCode::UnknownOperator, "'" + op + "'");
    std::size_t k = 0;
    for (Value v : slots) k = k * size_ + v;
    return tables_[*idx].at(k);
  }

  /// Mixed-radix decoding used by every table in this library: the first
  /// slot is the most significant digit.
  static void decode(std::size_t k, std::size_t size, std::vector<Value>& args) {
    for (std::size_t i = args.size(); i-- > 0;) {
      args[i] = static_cast<Value>(size == 0 ? 0 : k % size);
      if (size) k /= size;
    }
  }

  friend bool operator==(const FiniteAlgebra& a, const FiniteAlgebra& b) {
    return a.sig_ == b.sig_ && a.size_ == b.size_ && a.probe_ == b.probe_ && a.tables_ == b.tables_;
  }

 private:
  Signature sig_;
  std::size_t size_ = 0;
  std::size_t probe_ = 0;
  std::vector<std::vector<Value>> tables_;
  std::vector<std::string> labels_;
};

/// Visits every S-node over a carrier of the given size in canonical order:
/// operators in signature order, slot vectors in lexicographic order.
/// Stops early when the visitor returns false. Throws BudgetExceeded when the
/// node count exceeds the budget.
template <class Visit>
void for_each_snode(const Signature& sig, std::size_t carrier, std::size_t probe, std::size_t budget, Visit&& visit) {
  std::size_t total = 0;
  for (const auto& op : sig.ops()) {
    auto n = assignment_count(carrier, slot_count(op.arity, probe), budget);
    if (!n || (total += *n) > budget)
      fail(ErrorCode::BudgetExceeded, "more than " + std::to_string(budget) + " S-nodes to enumerate");
  }
  for (const auto& op : sig.ops()) {
    std::size_t slots = slot_count(op.arity, probe);
    std::size_t n = *assignment_count(carrier, slots);
    std::vector<Value> args(slots);
    for (std::size_t k = 0; k < n; ++k) {
      FiniteAlgebra::decode(k, carrier, args);
      if (!visit(SNode<Value>{op.name, branches_from_slots(op.arity, args)})) return;
    }
  }
}

struct HomCheck {
  bool ok = true;
  std::optional<SNode<Value>> counterexample;
};

/// isHom h: checks s'(a, h . b) == h(s(a, b)) for every S-node over the
/// source carrier; reports the first violation in canonical order.
inline HomCheck check_hom(const std::vector<Value>& h, const FiniteAlgebra& from, const FiniteAlgebra& to,
                          std::size_t budget = 1u << 22) {
  if (h.size() != from.size()) fail(ErrorCode::InvalidArgument, "map must be total on the source carrier");
  HomCheck out;
  for_each_snode(from.signature(), from.size(), from.probe(), budget, [&](const SNode<Value>& s) {
    Value lhs = to(map_s([&](Value v) { return h.at(v); }, s));
    Value rhs = h.at(from(s));
    if (lhs != rhs) {
      out.ok = false;
      out.counterexample = s;
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace qwt
