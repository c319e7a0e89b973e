#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"

namespace qwt {

/// A branch map B a -> T. Finite arities hold a vector; omega arities hold a
/// finite table of (index, value) pairs plus a default for every other index.
///
/// Omega tables are kept normalized: indices strictly increasing and no entry
/// equal to the default. Structural equality therefore coincides with
/// extensional equality of the described function on all of the naturals.
template <class T>
class BranchMap {
 public:
  struct Omega {
    std::vector<std::pair<std::size_t, T>> table;
    T fallback;
  };

  BranchMap() : rep_(std::vector<T>{}) {}

  static BranchMap finite(std::vector<T> items) {
    BranchMap m;
    m.rep_ = std::move(items);
    return m;
  }

  static BranchMap omega(std::vector<std::pair<std::size_t, T>> table, T fallback) {
    std::sort(table.begin(), table.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < table.size(); ++i)
      if (table[i].first == table[i - 1].first)
        fail(ErrorCode::InvalidArgument, "omega branch table repeats index " + std::to_string(table[i].first));
    std::erase_if(table, [&](const auto& e) { return e.second == fallback; });
    BranchMap m;
    m.rep_ = Omega{std::move(table), std::move(fallback)};
    return m;
  }

  bool is_omega() const { return std::holds_alternative<Omega>(rep_); }

  const std::vector<T>& items() const { return std::get<std::vector<T>>(rep_); }
  const Omega& omega_rep() const { return std::get<Omega>(rep_); }

  /// Number of stored children (finite items, or table entries plus default).
  std::size_t stored() const {
    if (is_omega()) return omega_rep().table.size() + 1;
    return items().size();
  }

  /// One past the largest index that may differ from the default; for finite
  /// maps the item count.
  std::size_t extent() const {
    if (!is_omega()) return items().size();
    const auto& t = omega_rep().table;
    return t.empty() ? 0 : t.back().first + 1;
  }

  const T& at(std::size_t i) const {
    if (!is_omega()) {
      if (i >= items().size()) fail(ErrorCode::ArityMismatch, "branch index " + std::to_string(i) + " out of range");
      return items()[i];
    }
    const auto& o = omega_rep();
    auto it = std::lower_bound(o.table.begin(), o.table.end(), i,
                               [](const auto& e, std::size_t k) { return e.first < k; });
    if (it != o.table.end() && it->first == i) return it->second;
    return o.fallback;
  }

  bool fits(const Arity& a) const {
    if (a.is_omega()) return is_omega();
    return !is_omega() && items().size() == a.count();
  }

  /// Visits every stored child once (table entries in index order, then the default).
  template <class F>
  void for_each(F&& f) const {
    if (!is_omega()) {
      for (const auto& x : items()) f(x);
      return;
    }
    for (const auto& [i, x] : omega_rep().table) f(x);
    f(omega_rep().fallback);
  }

  template <class F>
  auto map(F&& f) const -> BranchMap<std::decay_t<std::invoke_result_t<F&, const T&>>> {
    using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
    if (!is_omega()) {
      std::vector<U> out;
      out.reserve(items().size());
      for (const auto& x : items()) out.push_back(f(x));
      return BranchMap<U>::finite(std::move(out));
    }
    const auto& o = omega_rep();
    std::vector<std::pair<std::size_t, U>> table;
    table.reserve(o.table.size());
    for (const auto& [i, x] : o.table) table.emplace_back(i, f(x));
    U d = f(o.fallback);
    return BranchMap<U>::omega(std::move(table), std::move(d));
  }

  /// Three-way extensional comparison with a caller-supplied element order.
  /// Finite maps sort before omega maps.
  template <class Cmp>
  int compare(const BranchMap& other, Cmp&& cmp) const {
    if (is_omega() != other.is_omega()) return is_omega() ? 1 : -1;
    if (!is_omega()) {
      const auto& a = items();
      const auto& b = other.items();
      if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = cmp(a[i], b[i]); c != 0) return c;
      return 0;
    }
    std::size_t end = std::max(extent(), other.extent());
    for (std::size_t i = 0; i < end; ++i)
      if (int c = cmp(at(i), other.at(i)); c != 0) return c;
    return cmp(omega_rep().fallback, other.omega_rep().fallback);
  }

  friend bool operator==(const BranchMap& a, const BranchMap& b) {
    if (a.is_omega() != b.is_omega()) return false;
    if (!a.is_omega()) return a.items() == b.items();
    const auto& x = a.omega_rep();
    const auto& y = b.omega_rep();
    return x.fallback == y.fallback && x.table == y.table;
  }

 private:
  std::variant<std::vector<T>, Omega> rep_;
};

/// One layer of the signature functor: S X = sum over a, (B a -> X).
template <class T>
struct SNode {
  std::string op;
  BranchMap<T> branches;

  friend bool operator==(const SNode&, const SNode&) = default;
};

/// S' f (a, b) = (a, f . b)
template <class T, class F>
auto map_s(F&& f, const SNode<T>& s) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  return SNode<U>{s.op, s.branches.map(std::forward<F>(f))};
}

}  // namespace qwt
