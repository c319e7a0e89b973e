#pragma once

#include <sstream>
#include <string>

#include "qwt/core/term.hpp"

namespace qwt {

/// Raw term syntax: `op`, `op(t1, t2)`, and `op{0: t, 3: u, _: d}` for omega
/// branches. Leaves are rendered by `leaf`.
template <class X, class LeafFn>
void print_term(std::ostream& os, const Term<X>& t, LeafFn&& leaf) {
  if (t.is_var()) {
    os << leaf(t.var_value());
    return;
  }
  os << t.op();
  const auto& b = t.branches();
  if (!b.is_omega()) {
    if (b.items().empty()) return;
    os << '(';
    for (std::size_t i = 0; i < b.items().size(); ++i) {
      if (i) os << ", ";
      print_term(os, b.items()[i], leaf);
    }
    os << ')';
    return;
  }
  os << '{';
  for (const auto& [i, c] : b.omega_rep().table) {
    os << i << ": ";
    print_term(os, c, leaf);
    os << ", ";
  }
  os << "_: ";
  print_term(os, b.omega_rep().fallback, leaf);
  os << '}';
}

inline std::string show(const OpenTerm& t) {
  std::ostringstream os;
  print_term(os, t, [](VarIndex v) { return "$" + std::to_string(v); });
  return os.str();
}

}  // namespace qwt
