#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "support.hpp"

using namespace qwt;
using namespace qwt::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output when `merge` is set.
Run qwt_cli(const std::string& args, bool merge = false) {
  std::string cmd = std::string("cd '") + QWT_FIXTURES + "' && '" + QWT_CLI + "' " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json json_of(const Run& r) { return Json::parse(r.out); }

}  // namespace

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(qwt_cli("check bag.qit").code, 0);
  EXPECT_EQ(qwt_cli("check omega_tree.qit").code, 0);
  auto neg = qwt_cli("check negative_pi.qit", true);
  EXPECT_EQ(neg.code, 2);
  EXPECT_NE(neg.out.find("PositivityError"), std::string::npos);
  auto cond = qwt_cli("check conditional.qit", true);
  EXPECT_EQ(cond.code, 2);
  EXPECT_NE(cond.out.find("ConditionalUnsupported"), std::string::npos);
  EXPECT_EQ(qwt_cli("check does_not_exist.qit").code, 1);
  EXPECT_EQ(qwt_cli("check").code, 1);
  EXPECT_EQ(qwt_cli("frobnicate bag.qit").code, 1);
  EXPECT_EQ(qwt_cli("check bag.qit --probe 0").code, 1);
}

TEST(Cli, CheckReportsClassification) {
  auto j = json_of(qwt_cli("check omega_tree.qit"));
  EXPECT_EQ(j["classification"]["finitary"], false);
  EXPECT_EQ(j["classification"]["recursive"], true);
}

TEST(Cli, ElaborateMatchesFixture) {
  auto r = qwt_cli("elaborate bag.qit");
  ASSERT_EQ(r.code, 0);
  auto j = json_of(r);
  j.erase("classification");
  EXPECT_EQ(j.dump() + "\n", read_fixture("expected/bag.theory.json"));
  EXPECT_EQ(qwt_cli("elaborate ordinal.json").code, 0);
}

TEST(Cli, EqVerdicts) {
  auto proved = qwt_cli("eq bag.qit 'a::b::[]' 'b::a::[]'");
  EXPECT_EQ(proved.code, 0);
  EXPECT_EQ(json_of(proved)["verdict"], "proved");
  EXPECT_FALSE(json_of(proved)["derivation"].empty());

  auto sep = qwt_cli("eq bag.qit 'a::[]' 'b::[]'");
  EXPECT_EQ(sep.code, 4);
  EXPECT_EQ(json_of(sep)["algebra"]["carrier"], 2);

  auto unknown = qwt_cli("eq bag.qit 'a::[]' 'b::[]' --no-separate");
  EXPECT_EQ(unknown.code, 3);
  EXPECT_EQ(json_of(unknown)["verdict"], "unknown");

  EXPECT_EQ(qwt_cli("eq ordinal.json zero 'succ(zero)' --no-separate").code, 3);
  EXPECT_EQ(qwt_cli("eq ordinal.qit 'sup {_: zero}' zero").code, 0);
  EXPECT_EQ(qwt_cli("eq bag.qit 'a::[]' 'q::[]'").code, 2);
  EXPECT_EQ(qwt_cli("eq bag.qit 'cons[a](nil)' 'cons[a](nil)'").code, 0);
}

TEST(Cli, EqOnOmegaTree) {
  auto r = qwt_cli("eq omega_tree.qit 'node a {0: node b {_: leaf}, _: leaf}' 'node a {1: node b {_: leaf}, _: leaf}'");
  EXPECT_EQ(r.code, 0);
  auto s = qwt_cli("eq omega_tree.qit leaf 'node a {_: leaf}'");
  EXPECT_EQ(s.code, 4);
  EXPECT_EQ(json_of(s)["algebra"]["carrier"], 2);
}

TEST(Cli, EnumerateCountsAndDeterminism) {
  auto a = qwt_cli("enumerate bag.qit --size-bound 3");
  auto b = qwt_cli("enumerate bag.qit --size-bound 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(json_of(a)["count"], 6);
  EXPECT_EQ(a.out, b.out);
  auto w = qwt_cli("enumerate wreductions.json --size-bound 4");
  EXPECT_EQ(json_of(w)["count"], 1);
  auto none = qwt_cli("enumerate wreductions.json --size-bound 4 --format text");
  EXPECT_NE(none.out.find("1 classes"), std::string::npos);
}

TEST(Cli, SatAndRec) {
  EXPECT_EQ(qwt_cli("sat bag.qit --algebra bag_length.json").code, 0);
  auto bad = qwt_cli("sat bag.qit --algebra bag_last.json");
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(json_of(bad)["equation"], "swap[a,b]");
  EXPECT_EQ(qwt_cli("sat bag.qit").code, 1);
  EXPECT_EQ(qwt_cli("sat bag.qit --algebra missing.json").code, 1);

  auto rec = qwt_cli("rec bag.qit --algebra bag_length.json --term 'a :: b :: a :: []'");
  EXPECT_EQ(rec.code, 0);
  EXPECT_EQ(json_of(rec)["value"], "3");
  EXPECT_EQ(qwt_cli("rec bag.qit --target bag_length_corrupted.target.json --term '[]'").code, 2);
  EXPECT_EQ(qwt_cli("rec bag.qit --algebra bag_last.json --term '[]'").code, 2);
}

TEST(Cli, Separate) {
  EXPECT_EQ(qwt_cli("separate bag.qit 'a::[]' 'b::[]'").code, 0);
  auto r = qwt_cli("separate bag.qit 'a::b::[]' 'b::a::[]' --carrier-bound 2");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json_of(r)["found"], false);
}

TEST(Cli, Selftest) {
  auto bag = qwt_cli("selftest bag.qit");
  EXPECT_EQ(bag.code, 0);
  EXPECT_EQ(json_of(bag)["ok"], true);
  EXPECT_EQ(qwt_cli("selftest omega_tree.qit").code, 0);
  EXPECT_EQ(qwt_cli("selftest bag.qit --algebra bag_length.json").code, 0);

  auto w = qwt_cli("selftest wreductions.json");
  EXPECT_EQ(w.code, 0);
  EXPECT_EQ(json_of(w)["classes"], 1);

  auto bad = qwt_cli("selftest bag.qit --target bag_length_corrupted.target.json");
  EXPECT_EQ(bad.code, 5);
  auto j = json_of(bad);
  EXPECT_EQ(j["recHom"]["ok"], false);
  EXPECT_TRUE(j["recHom"].contains("counterexample"));
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  for (const char* args : {"selftest bag.qit", "eq bag.qit 'a::b::[]' 'b::a::[]'", "elaborate omega_tree.qit",
                           "separate bag.qit 'a::[]' '[]'"})
    EXPECT_EQ(qwt_cli(args).out, qwt_cli(args).out) << args;
}
