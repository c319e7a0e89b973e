#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qwt/core/algebra.hpp"
#include "qwt/core/error.hpp"
#include "qwt/core/term.hpp"
#include "qwt/equations/system.hpp"

namespace qwt {

struct SeparatorSearch {
  std::optional<FiniteAlgebra> algebra;
  std::size_t tried = 0;
  /// True when the budget ran out before the space was covered.
  bool exhausted = false;
};

/// Searches algebras of carrier 2..bound, tables in lexicographic order, for
/// one that satisfies the system and evaluates t and u differently. Such an
/// algebra certifies t != u in the initial algebra.
inline SeparatorSearch find_separator(const Signature& sig, const EquationSystem& sys, const OpenTerm& t,
                                      const OpenTerm& u, std::size_t carrier_bound, std::size_t budget = 2000000) {
  if (!is_closed(t) || !is_closed(u)) fail(ErrorCode::UnboundVariable, "separator terms must be closed");
  check_term(sig, t);
  check_term(sig, u);
  SeparatorSearch out;
  if (t == u) return out;
  auto none = [](VarIndex) -> Value { fail(ErrorCode::UnboundVariable, "closed term"); };
  // A one-point carrier never separates anything.
  for (std::size_t n = 2; n <= carrier_bound; ++n) {
    // Table entries form one mixed-radix counter over all operators.
    std::vector<std::vector<Value>> tables;
    bool too_big = false;
    for (const auto& op : sig.ops()) {
      auto c = assignment_count(n, slot_count(op.arity, sys.probe()), 1u << 20);
      if (!c) {
        too_big = true;
        break;
      }
      tables.emplace_back(*c, 0);
    }
    if (too_big) {
      out.exhausted = true;
      return out;
    }
    while (true) {
      if (++out.tried > budget) {
        out.exhausted = true;
        return out;
      }
      FiniteAlgebra alg(sig, n, sys.probe(), tables);
      if (eval_alg(t, none, alg) != eval_alg(u, none, alg) && sat_check(alg, sys).satisfied) {
        out.algebra = std::move(alg);
        return out;
      }
      // Increment, last cell least significant.
      bool carried = true;
      for (std::size_t i = tables.size(); carried && i-- > 0;)
        for (std::size_t k = tables[i].size(); carried && k-- > 0;) {
          if (++tables[i][k] < n)
            carried = false;
          else
            tables[i][k] = 0;
        }
      if (carried) break;
    }
  }
  return out;
}

}  // namespace qwt
