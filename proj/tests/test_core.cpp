#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "support.hpp"

using namespace qwt;
using namespace qwt::testing;
using namespace qwt::testing::gen;

TEST(Signature, RejectsDuplicateOperators) {
  Signature sig;
  sig.add("nil", Arity::finite(0));
  EXPECT_THROW(sig.add("nil", Arity::finite(1)), Error);
  EXPECT_TRUE(sig.contains("nil"));
  EXPECT_FALSE(sig.has_omega());
  sig.add("sup", Arity::omega());
  EXPECT_TRUE(sig.has_omega());
}

TEST(BranchMap, OmegaEntriesEqualToDefaultAreDropped) {
  auto leaf = OpenTerm::constant("leaf");
  auto a = BranchMap<OpenTerm>::omega({{3, leaf}, {0, leaf}}, leaf);
  auto b = BranchMap<OpenTerm>::omega({}, leaf);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.stored(), 1u);
  EXPECT_THROW(BranchMap<OpenTerm>::omega({{1, leaf}, {1, v(0)}}, v(2)), Error);
}

TEST(BranchMap, OmegaLookupFallsBackToDefault) {
  auto m = BranchMap<int>::omega({{2, 7}, {0, 5}}, 1);
  EXPECT_EQ(m.at(0), 5);
  EXPECT_EQ(m.at(1), 1);
  EXPECT_EQ(m.at(2), 7);
  EXPECT_EQ(m.at(1000), 1);
}

TEST(Term, SizeCountsNodesAndVariables) {
  EXPECT_EQ(v(0).size(), 1u);
  EXPECT_EQ(g(s(v(0)), v(1)).size(), 4u);
  EXPECT_EQ(depth_of(g(s(v(0)), v(1))), 2u);
}

TEST(Term, EqualTermsHashEqual) {
  auto by = reference_terms(4);
  auto all = flatten(by);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      EXPECT_EQ(all[i] == all[j], i == j);
      if (i == j) {
        EXPECT_EQ(all[i].hash(), all[j].hash());
      }
      EXPECT_EQ(compare(all[i], all[j]) == 0, i == j);
    }
}

TEST(Term, CheckTermRejectsWrongShapes) {
  auto sig = reference_signature();
  EXPECT_NO_THROW(check_term(sig, g(v(0), s(v(1)))));
  EXPECT_THROW(check_term(sig, OpenTerm::node("g", BranchMap<OpenTerm>::finite({v(0)}))), Error);
  EXPECT_THROW(check_term(sig, OpenTerm::constant("nope")), Error);
}

// Monad laws, exhaustive over terms of size <= 4 with substitutions drawn
// from the terms of size <= 2.
TEST(MonadLaws, LeftUnit) {
  auto pool = flatten(reference_terms(2));
  for (const auto& rho : substitutions(pool))
    for (VarIndex x : {0u, 1u}) EXPECT_EQ(subst(v(x), [&](VarIndex y) { return rho[y]; }), rho[x]);
}

TEST(MonadLaws, RightUnit) {
  for (const auto& t : flatten(reference_terms(4))) EXPECT_EQ(subst(t, [](VarIndex y) { return v(y); }), t);
}

TEST(MonadLaws, Associativity) {
  auto terms = flatten(reference_terms(4));
  auto subs = substitutions(flatten(reference_terms(2)));
  std::size_t checked = 0;
  for (const auto& t : terms)
    for (const auto& rho : subs)
      for (const auto& sigma : subs) {
        auto r = [&](VarIndex y) { return rho[y]; };
        auto sg = [&](VarIndex y) { return sigma[y]; };
        auto lhs = subst(subst(t, r), sg);
        auto rhs = subst(t, [&](VarIndex y) { return subst(rho[y], sg); });
        ASSERT_EQ(lhs, rhs);
        ++checked;
      }
  EXPECT_EQ(checked, terms.size() * subs.size() * subs.size());
}

TEST(FunctorLaws, MapTIdentity) {
  for (const auto& t : flatten(reference_terms(4))) EXPECT_EQ(map_t([](VarIndex x) { return x; }, t), t);
}

TEST(FunctorLaws, MapTComposition) {
  std::vector<std::vector<VarIndex>> maps{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (const auto& t : flatten(reference_terms(4)))
    for (const auto& f : maps)
      for (const auto& h : maps) {
        auto fn = [&](VarIndex x) { return f[x]; };
        auto hn = [&](VarIndex x) { return h[x]; };
        EXPECT_EQ(map_t(hn, map_t(fn, t)), map_t([&](VarIndex x) { return h[f[x]]; }, t));
      }
}

TEST(FunctorLaws, MapSIdentityAndComposition) {
  std::vector<SNode<int>> nodes;
  for (int a = 0; a < 3; ++a) {
    nodes.push_back({"s", BranchMap<int>::finite({a})});
    for (int b = 0; b < 3; ++b) nodes.push_back({"g", BranchMap<int>::finite({a, b})});
    nodes.push_back({"w", BranchMap<int>::omega({{0, a}, {4, 2 - a}}, 1)});
  }
  auto f = [](int x) { return x * 2 + 1; };
  auto h = [](int x) { return x - 3; };
  for (const auto& n : nodes) {
    auto id = map_s([](int x) { return x; }, n);
    EXPECT_EQ(id.op, n.op);
    EXPECT_EQ(id.branches, n.branches);
    auto lhs = map_s(h, map_s(f, n));
    auto rhs = map_s([&](int x) { return h(f(x)); }, n);
    EXPECT_EQ(lhs.branches, rhs.branches);
  }
}

TEST(FunctorLaws, MapTAgreesWithBindOfEta) {
  auto terms = flatten(reference_terms(4));
  auto f = [](VarIndex x) { return 1 - x; };
  for (const auto& t : terms) EXPECT_EQ(map_t(f, t), subst(t, [&](VarIndex x) { return v(f(x)); }));
}

TEST(Enumerate, ClosedTermCountsMatchHandCount) {
  Signature sig;
  sig.add("c", Arity::finite(0));
  sig.add("s", Arity::finite(1));
  sig.add("g", Arity::finite(2));
  // sizes 1..4: c; s c; s s c, g c c; s s s c, s g c c, g c (s c), g (s c) c
  EXPECT_EQ(closed_terms_up_to(sig, 1, 2).size(), 1u);
  EXPECT_EQ(closed_terms_up_to(sig, 2, 2).size(), 2u);
  EXPECT_EQ(closed_terms_up_to(sig, 3, 2).size(), 4u);
  EXPECT_EQ(closed_terms_up_to(sig, 4, 2).size(), 8u);
  auto ts = closed_terms_up_to(sig, 4, 2);
  auto less = [](const OpenTerm& a, const OpenTerm& b) { return compare(a, b) < 0; };
  EXPECT_EQ((std::set<OpenTerm, decltype(less)>(ts.begin(), ts.end(), less).size()), ts.size());
}

TEST(Algebra, LengthOfTwoElementListIsTwo) {
  auto el = schema::elaborate(schema::parse_decl(kBagSource));
  auto len = length_algebra(el.theory.signature, 5);
  auto t = list_term({"a", "b"});
  auto none = [](VarIndex) -> Value { ADD_FAILURE(); return 0; };
  EXPECT_EQ(eval_alg(t, none, len), 2u);
}

TEST(Algebra, TableSizeIsChecked) {
  Signature sig;
  sig.add("s", Arity::finite(1));
  EXPECT_THROW(FiniteAlgebra(sig, 2, 2, {{0}}), Error);
  EXPECT_THROW(FiniteAlgebra(sig, 2, 2, {{0, 2}}), Error);
  EXPECT_NO_THROW(FiniteAlgebra(sig, 2, 2, {{1, 0}}));
}

TEST(Algebra, OmegaOperatorUsesProbePlusOneSlots) {
  Signature sig;
  sig.add("sup", Arity::omega());
  // max over the first two entries and the tail
  auto alg = FiniteAlgebra::tabulate(sig, 3, 2, [](const std::string&, const std::vector<Value>& a) {
    return *std::max_element(a.begin(), a.end());
  });
  EXPECT_EQ(alg.tables()[0].size(), 27u);
  SNode<Value> n{"sup", BranchMap<Value>::omega({{1, 2}}, 0)};
  EXPECT_EQ(alg(n), 2u);
  SNode<Value> far{"sup", BranchMap<Value>::omega({{7, 2}}, 1)};
  try {
    alg(far);
    ADD_FAILURE() << "table entry past the probe was accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProbeExceeded);
  }
}

TEST(Hom, IdentityIsAHomAndAConstantIsNot) {
  Signature sig;
  sig.add("z", Arity::finite(0));
  sig.add("s", Arity::finite(1));
  auto mod3 = FiniteAlgebra::tabulate(sig, 3, 2, [](const std::string& op, const std::vector<Value>& a) -> Value {
    return op == "z" ? 0 : (a[0] + 1) % 3;
  });
  EXPECT_TRUE(check_hom({0, 1, 2}, mod3, mod3).ok);
  auto bad = check_hom({0, 0, 0}, mod3, mod3);
  EXPECT_FALSE(bad.ok);
  ASSERT_TRUE(bad.counterexample);
  EXPECT_EQ(bad.counterexample->op, "s");
}

TEST(Json, SignatureTermAndAlgebraRoundTrip) {
  Signature sig;
  sig.add("leaf", Arity::finite(0));
  sig.add("node", Arity::omega());
  EXPECT_EQ(signature_from_json(to_json(sig)), sig);
  auto t = OpenTerm::node("node", BranchMap<OpenTerm>::omega({{0, OpenTerm::constant("leaf")}}, v(3)));
  EXPECT_EQ(term_from_json(to_json(t)), t);
  auto alg = FiniteAlgebra::tabulate(sig, 2, 2, [](const std::string&, const std::vector<Value>& a) {
    return a.empty() ? Value{0} : a[0];
  });
  EXPECT_EQ(algebra_from_json(sig, to_json(alg)), alg);
  EXPECT_THROW(signature_from_json(Json::parse(R"({"ops": 3})")), Error);
}

TEST(Read, InvertsShow) {
  std::vector<OpenTerm> samples{
      OpenTerm::constant("nil"),
      list_term({"a", "b", "a"}),
      OpenTerm::node("node[a]", BranchMap<OpenTerm>::omega({{0, OpenTerm::constant("leaf")}, {5, v(2)}}, v(1))),
      g(s(v(0)), v(1)),
  };
  for (const auto& t : samples) EXPECT_EQ(read_term(show(t)), t) << show(t);
  EXPECT_EQ(read_term(" cons[a] ( nil ) "), list_term({"a"}));
  EXPECT_THROW(read_term("cons[a](nil"), Error);
  EXPECT_THROW(read_term("f{0: a}"), Error);
}
