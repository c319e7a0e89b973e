#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace qwt;
using namespace qwt::testing;

namespace {

OpenTerm random_list(std::mt19937& rng, std::size_t max_len) {
  std::vector<std::string> xs(rng() % (max_len + 1));
  for (auto& x : xs) x = rng() % 2 ? "a" : "b";
  return list_term(xs);
}

}  // namespace

TEST(Bag, OracleExamples) {
  auto bag = bagOf({"a", "b"});
  EXPECT_TRUE(bag.oracle(list_term({"a", "b"}), list_term({"b", "a"})));
  EXPECT_FALSE(bag.oracle(list_term({"a"}), list_term({"b"})));
  EXPECT_FALSE(bag.oracle(list_term({"a", "a"}), list_term({"a"})));
  EXPECT_THROW(bag.oracle(OpenTerm::var(0), list_term({})), Error);
  EXPECT_THROW(bagOf({"a", "a"}), Error);
}

TEST(Bag, OracleIsACongruentEquivalence) {
  auto bag = bagOf({"a", "b"});
  std::mt19937 rng(42);
  for (int i = 0; i < 300; ++i) {
    auto t = random_list(rng, 4);
    auto u = random_list(rng, 4);
    auto w = random_list(rng, 4);
    EXPECT_TRUE(bag.oracle(t, t));
    EXPECT_EQ(bag.oracle(t, u), bag.oracle(u, t));
    if (bag.oracle(t, u) && bag.oracle(u, w)) {
      EXPECT_TRUE(bag.oracle(t, w));
    }
    for (const char* x : {"a", "b"}) {
      auto ct = OpenTerm::node(std::string("cons[") + x + "]", BranchMap<OpenTerm>::finite({t}));
      auto cu = OpenTerm::node(std::string("cons[") + x + "]", BranchMap<OpenTerm>::finite({u}));
      if (bag.oracle(t, u)) {
        EXPECT_TRUE(bag.oracle(ct, cu));
      }
    }
  }
}

TEST(Bag, OracleAgreesWithIndependentCount) {
  auto bag = bagOf({"a", "b"});
  auto lists = all_lists({"a", "b"}, 3);
  for (const auto& l : lists)
    for (const auto& m : lists) EXPECT_EQ(bag.oracle(list_term(l), list_term(m)), list_counts(l) == list_counts(m));
}

TEST(Bag, EngineIsSoundAgainstOracle) {
  auto bag = bagOf({"a", "b"});
  QWState st(bag.signature, bag.equations);
  auto lists = all_lists({"a", "b"}, 4);
  std::vector<ClassId> ids;
  for (const auto& l : lists) ids.push_back(st.intern(list_term(l)));
  st.saturate();
  for (std::size_t i = 0; i < lists.size(); ++i)
    for (std::size_t j = i + 1; j < lists.size(); ++j)
      if (st.decide_eq(ids[i], ids[j]).proved) {
        EXPECT_TRUE(bag.oracle(list_term(lists[i]), list_term(lists[j])));
      }
}

TEST(OmegaTree, RejectsBadPermutations) {
  try {
    omegaTreeOf({"a"}, 2, {{"bad", {0, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
  try {
    omegaTreeOf({"a"}, 2, {{"rot", {1, 2, 0}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProbeExceeded);
  }
  EXPECT_NO_THROW(omegaTreeOf({"a"}, 3, {{"rot", {1, 2, 0}}}));
}

TEST(OmegaTree, ShapeOfTheTruncatedTuple) {
  auto t = omegaTreeOf({"a", "b"}, 3, {{"s01", {1, 0}}, {"rot", {1, 2, 0}}});
  EXPECT_EQ(t.signature.size(), 3u);
  EXPECT_TRUE(t.signature.arity("node[a]").is_omega());
  ASSERT_EQ(t.equations.size(), 4u);
  for (const auto& e : t.equations.equations()) EXPECT_EQ(e.vars, 4u);
  EXPECT_FALSE(t.oracle);
}

TEST(OmegaTree, RotationIsProvedOnAConcreteTree) {
  auto t = omegaTreeOf({"a", "b"}, 3, {{"rot", {1, 2, 0}}});
  QWState st(t.signature, t.equations);
  auto leaf = OpenTerm::constant("leaf");
  auto b = OpenTerm::node("node[b]", BranchMap<OpenTerm>::omega({}, leaf));
  // g = {0: b}, g . rot = {2: b}
  auto x = st.intern(OpenTerm::node("node[a]", BranchMap<OpenTerm>::omega({{0, b}}, leaf)));
  auto y = st.intern(OpenTerm::node("node[a]", BranchMap<OpenTerm>::omega({{2, b}}, leaf)));
  EXPECT_TRUE(st.decide_eq(x, y).proved);
}

TEST(Ordinal, SignatureAndTerminalAlgebra) {
  auto o = lsOrdinalInstance();
  EXPECT_TRUE(o.signature.arity("sup").is_omega());
  EXPECT_EQ(o.signature.arity("succ"), Arity::finite(1));
  EXPECT_EQ(o.signature.arity("zero"), Arity::finite(0));
  EXPECT_EQ(o.equations.size(), 5u);
  EXPECT_FALSE(o.oracle);
  auto one = FiniteAlgebra::tabulate(o.signature, 1, 2, [](const std::string&, const std::vector<Value>&) {
    return Value{0};
  });
  EXPECT_TRUE(sat_check(one, o.equations).satisfied);
}

TEST(Ordinal, DistinctNotationsAreUnknown) {
  auto o = lsOrdinalInstance();
  QWState st(o.signature, o.equations);
  auto zero = OpenTerm::constant("zero");
  auto one = OpenTerm::node("succ", BranchMap<OpenTerm>::finite({zero}));
  auto d = st.decide_eq(st.intern(zero), st.intern(one));
  EXPECT_FALSE(d.proved);
}

TEST(Ordinal, SupEquationsFireOnInstances) {
  auto o = lsOrdinalInstance();
  QWState st(o.signature, o.equations);
  auto zero = OpenTerm::constant("zero");
  auto one = OpenTerm::node("succ", BranchMap<OpenTerm>::finite({zero}));
  auto sup_const = OpenTerm::node("sup", BranchMap<OpenTerm>::omega({}, one));
  EXPECT_TRUE(st.decide_eq(st.intern(sup_const), st.intern(one)).proved);
  EXPECT_TRUE(replay(st).ok);
}

TEST(Translations, SmallInstancesCollapse) {
  auto susp = twoPointSuspension();
  QWState s1(susp.signature, susp.equations);
  EXPECT_EQ(s1.enumerate(3).classes.size(), 1u);
  auto red = unaryReductions();
  for (std::size_t b = 1; b <= 5; ++b) {
    QWState free_v(red.signature, red.equations, {}, {"v"});
    EXPECT_EQ(free_v.enumerate(b).classes.size(), 1u);
    QWState empty(red.signature, red.equations);
    EXPECT_EQ(empty.enumerate(b).classes.size(), 0u);
  }
}

TEST(Export, InstancesRoundTripThroughJson) {
  for (const auto& inst : {bagOf({"a", "b"}), omegaTreeOf({"a"}, 2, {{"s01", {1, 0}}}), lsOrdinalInstance()}) {
    auto j = to_json(inst);
    auto sig = signature_from_json(j.at("signature"));
    EXPECT_EQ(sig, inst.signature) << inst.name;
    EXPECT_EQ(system_from_json(sig, j.at("equations")), inst.equations) << inst.name;
  }
}

TEST(Export, EnumerationCountsFixture) {
  auto counts = Json::parse(read_fixture("expected/enumeration_counts.json"));
  for (const auto& [name, by_bound] : counts.items()) {
    auto th = schema::elaborate(schema::parse_decl(read_fixture(name))).theory;
    for (const auto& [bound, want] : by_bound.items()) {
      QWState st(th.signature, th.equations);
      EXPECT_EQ(st.enumerate(std::stoul(bound)).classes.size(), want.get<std::size_t>()) << name << " @ " << bound;
    }
  }
}
