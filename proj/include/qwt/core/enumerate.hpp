#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qwt/core/error.hpp"
#include "qwt/core/signature.hpp"
#include "qwt/core/term.hpp"

namespace qwt {

/// All closed terms of size <= bound, in canonical order. Omega operators get
/// branch tables supported below the probe depth. Throws BudgetExceeded when
/// more than `limit` terms would be produced.
inline std::vector<OpenTerm> closed_terms_up_to(const Signature& sig, std::size_t bound, std::size_t probe,
                                                std::size_t limit = 200000) {
  std::vector<std::vector<OpenTerm>> by_size(bound + 1);
  std::size_t produced = 0;
  auto emit = [&](std::size_t s, OpenTerm t) {
    if (++produced > limit) fail(ErrorCode::BudgetExceeded, "more than " + std::to_string(limit) + " closed terms");
    by_size[s].push_back(std::move(t));
  };

  for (std::size_t s = 1; s <= bound; ++s) {
    for (const auto& op : sig.ops()) {
      if (op.arity.is_finite()) {
        std::size_t m = op.arity.count();
        if (m == 0) {
          if (s == 1) emit(s, OpenTerm::constant(op.name));
          continue;
        }
        std::vector<OpenTerm> picked;
        std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t slot, std::size_t remaining) {
          if (slot == m) {
            if (remaining == 0) emit(s, OpenTerm::node(op.name, BranchMap<OpenTerm>::finite(picked)));
            return;
          }
          std::size_t slots_left = m - slot - 1;
          for (std::size_t cs = 1; cs + slots_left <= remaining; ++cs)
            for (const auto& c : by_size[cs]) {
              picked.push_back(c);
              fill(slot + 1, remaining - cs);
              picked.pop_back();
            }
        };
        fill(0, s - 1);
      } else {
        // Default first, then each table index is either the default or a
        // different term.
        for (std::size_t ds = 1; ds < s; ++ds)
          for (const auto& d : by_size[ds]) {
            std::vector<std::pair<std::size_t, OpenTerm>> table;
            std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t idx, std::size_t remaining) {
              if (idx == probe) {
                if (remaining == 0) emit(s, OpenTerm::node(op.name, BranchMap<OpenTerm>::omega(table, d)));
                return;
              }
              fill(idx + 1, remaining);
              for (std::size_t cs = 1; cs <= remaining; ++cs)
                for (const auto& c : by_size[cs]) {
                  if (c == d) continue;
                  table.emplace_back(idx, c);
                  fill(idx + 1, remaining - cs);
                  table.pop_back();
                }
            };
            fill(0, s - 1 - ds);
          }
      }
    }
    std::sort(by_size[s].begin(), by_size[s].end());
  }

  std::vector<OpenTerm> out;
  for (auto& bucket : by_size)
    for (auto& t : bucket) out.push_back(std::move(t));
  return out;
}

}  // namespace qwt
