#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qwt/core/error.hpp"

namespace qwt {

/// Arity of an operator: a finite count n (branch indices 0..n-1) or omega
/// (branches indexed by the natural numbers).
class Arity {
 public:
  static Arity finite(std::size_t n) { return Arity(false, n); }
  static Arity omega() { return Arity(true, 0); }

  bool is_omega() const { return omega_; }
  bool is_finite() const { return !omega_; }
  /// Branch count of a finite arity; zero for omega.
  std::size_t count() const { return n_; }

  bool admits(std::size_t index) const { return omega_ || index < n_; }

  friend bool operator==(const Arity&, const Arity&) = default;

 private:
  Arity(bool omega, std::size_t n) : omega_(omega), n_(n) {}
  bool omega_;
  std::size_t n_;
};

struct OpDecl {
  std::string name;
  Arity arity;
  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

/// A signature (A, B): named operators, each with an arity.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<OpDecl> ops) {
    for (auto& op : ops) add(std::move(op.name), op.arity);
  }

  void add(std::string name, Arity arity) {
    if (index_.count(name)) fail(ErrorCode::DuplicateName, "operator '" + name + "' declared twice");
    index_.emplace(name, ops_.size());
    ops_.push_back({std::move(name), arity});
  }

  const std::vector<OpDecl>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const OpDecl& at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(ErrorCode::UnknownOperator, "'" + name + "'");
    return ops_[it->second];
  }

  const Arity& arity(const std::string& name) const { return at(name).arity; }

  bool has_omega() const {
    for (const auto& op : ops_)
      if (op.arity.is_omega()) return true;
    return false;
  }

  friend bool operator==(const Signature& a, const Signature& b) { return a.ops_ == b.ops_; }

 private:
  std::vector<OpDecl> ops_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace qwt
