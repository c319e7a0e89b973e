#include <gtest/gtest.h>

#include "support.hpp"

using namespace qwt;
using namespace qwt::testing;

namespace {

Theory bag_theory() { return schema::elaborate(schema::parse_decl(kBagSource)).theory; }

OpenTerm cons(const std::string& x, OpenTerm t) {
  return OpenTerm::node("cons[" + x + "]", BranchMap<OpenTerm>::finite({std::move(t)}));
}

std::size_t cons_count(const OpenTerm& t) {
  if (t.is_var()) return 0;
  std::size_t n = t.op() == "nil" ? 0 : 1;
  t.branches().for_each([&](const OpenTerm& c) { n += cons_count(c); });
  return n;
}

}  // namespace

TEST(System, ValidatesOperatorsVariablesAndNames) {
  auto th = bag_theory();
  const auto& sig = th.signature;
  EXPECT_THROW(make_system(sig, {{"e", 1, OpenTerm::var(1), OpenTerm::var(0)}}, 2), Error);
  EXPECT_THROW(make_system(sig, {{"e", 0, OpenTerm::constant("zz"), OpenTerm::constant("nil")}}, 2), Error);
  EXPECT_THROW(make_system(sig,
                           {{"e", 0, OpenTerm::constant("nil"), OpenTerm::constant("nil")},
                            {"e", 0, OpenTerm::constant("nil"), OpenTerm::constant("nil")}},
                           2),
               Error);
  EXPECT_NO_THROW(make_system(sig, {{"e", 1, cons("a", OpenTerm::var(0)), OpenTerm::var(0)}}, 2));
}

TEST(System, NameOrderSortsByName) {
  auto th = bag_theory();
  std::vector<std::string> names;
  for (auto i : th.equations.name_order()) names.push_back(th.equations.equations()[i].name);
  EXPECT_EQ(names, (std::vector<std::string>{"swap[a,a]", "swap[a,b]", "swap[b,a]", "swap[b,b]"}));
}

TEST(System, JsonRoundTrip) {
  auto th = bag_theory();
  EXPECT_EQ(system_from_json(th.signature, to_json(th.equations)), th.equations);
}

TEST(Sat, LengthAlgebraSatisfiesSwap) {
  auto th = bag_theory();
  auto r = sat_check(length_algebra(th.signature, 3), th.equations);
  EXPECT_TRUE(r.satisfied);
  EXPECT_EQ(r.fingerprint, sat_fingerprint(length_algebra(th.signature, 3), th.equations));
}

TEST(Sat, ReportsFirstViolationInNameOrder) {
  auto th = bag_theory();
  // "last element pushed": cons[x] ignores its argument.
  auto last = FiniteAlgebra::tabulate(th.signature, 3, 2, [](const std::string& op, const std::vector<Value>&) -> Value {
    return op == "nil" ? 0 : op == "cons[a]" ? 1 : 2;
  });
  auto r = sat_check(last, th.equations);
  ASSERT_FALSE(r.satisfied);
  EXPECT_EQ(r.equation, "swap[a,b]");
  EXPECT_EQ(r.env, (std::vector<Value>{0}));
  EXPECT_EQ(r.lhs, 1u);
  EXPECT_EQ(r.rhs, 2u);
  auto rev = sat_check(last, th.equations, 1u << 22, EnvOrder::Reversed);
  EXPECT_EQ(rev.equation, "swap[a,b]");
  EXPECT_EQ(rev.env, (std::vector<Value>{2}));
}

TEST(Sat, OnePointAlgebraSatisfiesEverything) {
  auto th = bag_theory();
  auto one = FiniteAlgebra::tabulate(th.signature, 1, 2, [](const std::string&, const std::vector<Value>&) {
    return Value{0};
  });
  EXPECT_TRUE(sat_check(one, th.equations).satisfied);
}

TEST(Sat, BudgetIsEnforced) {
  auto th = bag_theory();
  EXPECT_THROW(sat_check(length_algebra(th.signature, 3), th.equations, 3), Error);
}

TEST(Sat, FingerprintTracksAlgebraAndSystem) {
  auto th = bag_theory();
  auto a = length_algebra(th.signature, 3);
  auto b = length_algebra(th.signature, 4);
  EXPECT_NE(sat_fingerprint(a, th.equations), sat_fingerprint(b, th.equations));
  EquationSystem fewer({th.equations.equations()[0]}, 2);
  EXPECT_NE(sat_fingerprint(a, th.equations), sat_fingerprint(a, fewer));
}

// Indices are terms themselves; P(t) = {number of cons nodes in t}.
TEST(Lift, SizeFamilyOnClosedTerm) {
  auto env = [](const VarIndex&) -> std::pair<OpenTerm, std::size_t> { throw std::logic_error("closed"); };
  auto index_alg = [](const SNode<OpenTerm>& s) { return OpenTerm::node(s.op, s.branches); };
  auto step = [](const SNode<OpenTerm>& s, const BranchMap<std::size_t>& vals) -> std::size_t {
    return s.op == "nil" ? 0 : vals.items()[0] + 1;
  };
  auto fiber = [](const OpenTerm& t, std::size_t v) { return cons_count(t) == v; };
  auto t = list_term({"a", "b"});
  auto [idx, val] = lift(t, env, index_alg, step, fiber);
  EXPECT_EQ(idx, t);
  EXPECT_EQ(val, 2u);
}

TEST(Lift, OpenTermUsesEnvironmentPairs) {
  auto base = list_term({"b"});
  auto env = [&](const VarIndex&) { return std::pair<OpenTerm, std::size_t>{base, 1}; };
  auto index_alg = [](const SNode<OpenTerm>& s) { return OpenTerm::node(s.op, s.branches); };
  auto step = [](const SNode<OpenTerm>& s, const BranchMap<std::size_t>& vals) -> std::size_t {
    return s.op == "nil" ? 0 : vals.items()[0] + 1;
  };
  auto fiber = [](const OpenTerm& t, std::size_t v) { return cons_count(t) == v; };
  auto [idx, val] = lift(cons("a", OpenTerm::var(0)), env, index_alg, step, fiber);
  EXPECT_EQ(idx, list_term({"a", "b"}));  // first projection is t >>= fst . env
  EXPECT_EQ(val, 2u);
}

TEST(Lift, IllFormedStepRaisesFiberMismatch) {
  auto env = [](const VarIndex&) -> std::pair<OpenTerm, std::size_t> { throw std::logic_error("closed"); };
  auto index_alg = [](const SNode<OpenTerm>& s) { return OpenTerm::node(s.op, s.branches); };
  auto step = [](const SNode<OpenTerm>& s, const BranchMap<std::size_t>& vals) -> std::size_t {
    return s.op == "nil" ? 0 : vals.items()[0] + 2;
  };
  auto fiber = [](const OpenTerm& t, std::size_t v) { return cons_count(t) == v; };
  try {
    lift(list_term({"a"}), env, index_alg, step, fiber);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FiberMismatch);
  }
}

TEST(Freeify, GeneratorsComeFirstAndEquationsAreUnchanged) {
  auto th = bag_theory();
  auto fr = freeify(th.signature, th.equations, {"g0", "g1"});
  ASSERT_EQ(fr.signature.size(), th.signature.size() + 2);
  EXPECT_EQ(fr.signature.ops()[0].name, "g0");
  EXPECT_EQ(fr.signature.ops()[1].name, "g1");
  EXPECT_EQ(fr.signature.ops()[1].arity, Arity::finite(0));
  EXPECT_EQ(fr.equations, th.equations);
  EXPECT_THROW(freeify(th.signature, th.equations, {"nil"}), Error);
  auto same = freeify(th.signature, th.equations, {});
  EXPECT_EQ(same.signature, th.signature);
}

TEST(Translate, SuspensionCellRelatesBothPoints) {
  auto th = from_w_suspension({{"p", Arity::finite(0)}, {"q", Arity::finite(1)}}, {{"glue", "p", "q"}});
  ASSERT_EQ(th.equations.size(), 1u);
  const auto& e = th.equations.equations()[0];
  EXPECT_EQ(e.vars, 1u);  // 0 from p plus 1 from q
  EXPECT_EQ(e.lhs, OpenTerm::constant("p"));
  EXPECT_EQ(e.rhs, OpenTerm::node("q", BranchMap<OpenTerm>::finite({OpenTerm::var(0)})));
}

TEST(Translate, SuspensionOverOmegaUsesTruncatedFamilies) {
  auto th = from_w_suspension({{"w", Arity::omega()}, {"u", Arity::finite(1)}}, {{"c", "w", "u"}}, 3);
  const auto& e = th.equations.equations()[0];
  EXPECT_EQ(e.vars, 5u);  // 3 table vars + tail, then 1
  EXPECT_EQ(e.rhs, OpenTerm::node("u", BranchMap<OpenTerm>::finite({OpenTerm::var(4)})));
}

TEST(Translate, ReductionsRequireAPosition) {
  EXPECT_THROW(from_w_reductions({{"z", Arity::finite(0)}}, {std::nullopt}), Error);
  EXPECT_THROW(from_w_reductions({{"r", Arity::finite(1)}}, {std::size_t{1}}), Error);
  auto th = from_w_reductions({{"r", Arity::finite(2)}}, {std::size_t{1}});
  const auto& e = th.equations.equations()[0];
  EXPECT_EQ(e.name, "reduce[r]");
  EXPECT_EQ(e.rhs, OpenTerm::var(1));
  auto om = from_w_reductions({{"w", Arity::omega()}}, {std::size_t{9}}, 2);
  EXPECT_EQ(om.equations.equations()[0].rhs, OpenTerm::var(2));  // past the probe: the tail variable
}
