#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xfam/xfam.hpp"

using namespace xfam;

namespace {

void expect_refuted(const RefutationReport& rep) {
  EXPECT_EQ(rep.verdict, Verdict::Refuted) << rep.detail;
  EXPECT_TRUE(rep.prefix_equal);
  EXPECT_TRUE(rep.e2_stopped_at_k);
  EXPECT_EQ(rep.host_index, std::max(rep.stop_step, rep.hook_reach) + 1);
  EXPECT_EQ(rep.e2_size, 8 * rep.host_index + 1);
  EXPECT_GT(rep.e2_size, rep.stop_step + 1);
  EXPECT_LT(rep.e2_visited, rep.e2_size);
  // Independent count of what E2 touched.
  const auto seen = oracle::replay_visits(build_d(rep.host_index), rep.e2);
  EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), rep.e2_visited);
  ASSERT_EQ(rep.e1.queries.size(), rep.e2.queries.size());
  for (std::size_t q = 0; q < rep.e1.queries.size(); ++q) EXPECT_TRUE(rep.e1.queries[q].same_exchange(rep.e2.queries[q]));
}

}  // namespace

TEST(Premise, C3HubAndDmAntipodeAgreeBelowThreeM) {
  for (int m = 1; m <= 4; ++m) {
    const auto c3 = build_c(3);
    const auto d = build_d(m);
    for (int k = 1; k < 3 * m; ++k) ASSERT_TRUE(node_views_equal(c3, c_hub(3), d, d_antipode(m), k)) << m << " " << k;
    ASSERT_FALSE(node_views_equal(c3, c_hub(3), d, d_antipode(m), 3 * m)) << m;
  }
}

TEST(Premise, FamiliesAgreeUpToR) {
  for (int r = 0; r <= 4; ++r)
    for (int i = 1; i <= r; ++i) EXPECT_TRUE(port_isomorphic(c_family().member(i), fstar_family(r).member(i)));
}

TEST(Refute, NaiveCandidates) {
  for (int b : {0, 1, 5, 10}) {
    const auto rep = refute(naive_candidate(b));
    SCOPED_TRACE(rep.candidate);
    expect_refuted(rep);
    EXPECT_EQ(rep.hook_reach, b);
  }
}

TEST(Refute, NaiveThreeReadsSizesUpToSix) {
  const auto e1 = run_e1(naive_candidate(3), 200000);
  EXPECT_EQ(e1.hook_reach, 3);
  int largest = 0;
  for (const auto& q : e1.trace.queries)
    largest = std::max(largest, graph_from_json(nlohmann::json::parse(q.answer)).size());
  EXPECT_EQ(largest, 6);
}

TEST(Refute, MembershipStrawman) {
  const auto rep = refute(membership_strawman());
  EXPECT_EQ(rep.mode, HookMode::Decision);
  EXPECT_EQ(rep.hook_reach, 7);
  expect_refuted(rep);
}

TEST(Refute, ExploOnCPosingAsUniversal) {
  const auto rep = refute(dedicated_candidate(explo_agent(c_family())));
  EXPECT_EQ(rep.hook_reach, 0);
  expect_refuted(rep);
}

TEST(Refute, StopAtOnceIsRefutedOnD1) {
  const auto rep = refute(Candidate{"idle", HookMode::Enumeration, [](Walker&) {}});
  EXPECT_EQ(rep.stop_step, 0);
  EXPECT_EQ(rep.host_index, 1);
  EXPECT_EQ(rep.e2_visited, 1);
  expect_refuted(rep);
}

TEST(Refute, NeverStoppingSurvivesTheCap) {
  const auto rep = refute(Candidate{"spin", HookMode::Enumeration, [](Walker& w) {
                                      while (true) w.move(0);
                                    }},
                          RefuteConfig{500, 5000});
  EXPECT_EQ(rep.verdict, Verdict::SurvivedCap);
  EXPECT_EQ(rep.e1.length(), 500);
}

TEST(Refute, WrongHookFaults) {
  const auto rep = refute(Candidate{"asks-member", HookMode::Enumeration, [](Walker& w) { w.member(build_c(3)); }});
  EXPECT_EQ(rep.verdict, Verdict::Faulted);
}

TEST(Refute, HugeMIsACapNotACrash) {
  const auto rep = refute(naive_candidate(10), RefuteConfig{200000, 5});
  EXPECT_EQ(rep.verdict, Verdict::SurvivedCap);
}

TEST(Refute, ReportJson) {
  const auto j = refute(naive_candidate(0)).to_json();
  EXPECT_EQ(j.at("verdict"), "refuted");
  EXPECT_EQ(j.at("mode"), "enum");
  EXPECT_EQ(j.at("m"), j.at("k").get<int>() + 1);
}

// With r = 0 the dedicated agent for F*(r) explores the graph that defeats the candidate.
TEST(Refute, DedicatedFstarAgentExploresTheRefutingGraph) {
  const auto rep = refute(naive_candidate(0));
  ASSERT_EQ(rep.verdict, Verdict::Refuted);
  ASSERT_EQ(rep.hook_reach, 0);
  const auto host = build_d(rep.host_index);
  const auto t = run(a_fstar_agent(rep.hook_reach), host, d_antipode(rep.host_index), 1000000);
  EXPECT_TRUE(is_full_exploration(t, host));
}

// With r >= 1 the family holds C_3, whose hub looks like the antipode of D_j
// to depth 3j, so a finite clockwise probe cannot cover every D_j.
TEST(Refute, FstarWithCThreeDefeatsAnyFiniteProbe) {
  const int horizon = 8;
  const auto agent = a_fstar_agent(1, horizon);
  const int j = 6 * horizon;
  const auto host = build_d(j);
  EXPECT_FALSE(is_full_exploration(run(agent, host, d_antipode(j), 1000000), host));
  EXPECT_TRUE(node_views_equal(build_c(3), c_hub(3), host, d_antipode(j), 3 * j - 1));
}

TEST(External, StubEnumeratesMovesAndStops) {
  const auto cand = external_candidate({STUB_CANDIDATE}, HookMode::Enumeration);
  const auto e1 = run_e1(cand, 1000);
  ASSERT_EQ(e1.trace.status, RunStatus::Stopped) << e1.trace.fault;
  EXPECT_EQ(e1.stop_step, 3);
  EXPECT_EQ(e1.hook_reach, 2);
  expect_refuted(refute(cand));
}

TEST(External, StubAsksMembership) {
  const auto e1 = run_e1(external_candidate({STUB_CANDIDATE, "member"}, HookMode::Decision), 1000);
  ASSERT_EQ(e1.trace.status, RunStatus::Stopped) << e1.trace.fault;
  ASSERT_EQ(e1.trace.queries.size(), 1u);
  EXPECT_EQ(e1.trace.queries[0].answer, "yes");
}

TEST(External, RunawayStubHitsTheCap) {
  const auto rep = refute(external_candidate({STUB_CANDIDATE, "forever"}, HookMode::Enumeration), RefuteConfig{50, 5000});
  EXPECT_EQ(rep.verdict, Verdict::SurvivedCap);
}

TEST(External, MissingProgramFaults) {
  const auto rep = refute(external_candidate({"/nonexistent/candidate"}, HookMode::Enumeration));
  EXPECT_EQ(rep.verdict, Verdict::Faulted);
}

TEST(Registry, NamesResolve) {
  EXPECT_EQ(candidate_by_name("naive:B=4").name, "naive:B=4");
  EXPECT_EQ(candidate_by_name("member-strawman").mode, HookMode::Decision);
  EXPECT_EQ(candidate_by_name("explo:c").name, "explo:c");
  EXPECT_THROW(candidate_by_name("naive:B=x"), InvalidParameter);
  EXPECT_EQ(agent_by_name("a-fstar:r=2").agent.name, "a-fstar:r=2");
  EXPECT_TRUE(static_cast<bool>(agent_by_name("universal-oracle:c").hooks.oracle));
  EXPECT_THROW(agent_by_name("nope"), InvalidParameter);
}
