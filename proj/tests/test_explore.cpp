#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "xfam/xfam.hpp"

using namespace xfam;

namespace {

PortGraph k2() { return PortGraph({{HalfEdge{1, 0}}, {HalfEdge{0, 0}}}); }

// Every Check must leave the agent where it started.
void expect_checks_restore_position(const Trace& t) {
  for (const auto& m : t.marks)
    if (m.label == "check") {
      ASSERT_EQ(m.node, t.start) << "check mark at move " << m.position;
    }
}

Agent check_agent(TruncatedView target, bool* result) {
  return Agent{"check", [target = std::move(target), result](Walker& w) { *result = check_procedure(w, target); }};
}

}  // namespace

TEST(BasicWalk, K2AndP3) {
  const auto t = run(basic_walk_tree_agent(), k2(), 0, 10);
  EXPECT_EQ(t.status, RunStatus::Stopped);
  EXPECT_EQ(t.length(), 2);
  EXPECT_TRUE(is_full_exploration(t, k2()));
}

TEST(BasicWalk, EveryTreeUpToSixFromEveryStart) {
  for (int n = 2; n <= 6; ++n)
    for (const auto& tree : GraphCatalog::instance().trees_of_size(n))
      for (NodeId s = 0; s < n; ++s) {
        const auto t = run(basic_walk_tree_agent(), tree, s, 4 * n);
        ASSERT_EQ(t.status, RunStatus::Stopped);
        ASSERT_EQ(t.length(), 2 * (n - 1));
        ASSERT_EQ(t.final_node(), s);
        ASSERT_TRUE(is_full_exploration(t, tree));
      }
}

TEST(BasicWalk, FollowsTheOffsetOneRule) {
  for (const auto& tree : GraphCatalog::instance().trees_of_size(5)) {
    const auto t = run(basic_walk_tree_agent(), tree, 0, 100);
    std::optional<Port> entry;
    NodeId at = 0;
    for (const auto& s : t.steps) {
      ASSERT_EQ(s.exit_port, entry ? (*entry + 1) % tree.degree(at) : 0);
      entry = s.observation.entry_port;
      at = s.node;
    }
  }
}

TEST(BasicWalk, SampledTreesOfSevenAndEight) {
  std::mt19937 rng(31);
  for (int n = 7; n <= 8; ++n) {
    const auto& trees = GraphCatalog::instance().trees_of_size(n);
    for (int t = 0; t < 60; ++t) {
      const auto& tree = trees[rng() % trees.size()];
      for (NodeId s = 0; s < n; ++s)
        ASSERT_TRUE(is_full_exploration(run(basic_walk_tree_agent(), tree, s, 4 * n), tree));
    }
  }
}

TEST(BasicWalk, NeverStopsOnACycle) {
  EXPECT_EQ(run(basic_walk_tree_agent(), build_c(3), 0, 500).status, RunStatus::StepLimit);
}

TEST(Check, AgreesWithViewEqualityAndRestoresPosition) {
  std::vector<PortGraph> pool = {build_c(3), build_c(4), build_d(1), build_clockwise_ring(4), k2()};
  for (const auto& g : GraphCatalog::instance().graphs_of_size(4)) pool.push_back(g);
  for (std::size_t a = 0; a < pool.size(); a += 3)
    for (std::size_t b = 0; b < pool.size(); b += 5)
      for (int k = 1; k <= 4; ++k)
        for (NodeId v = 0; v < pool[a].size(); ++v)
          for (NodeId w = 0; w < pool[b].size(); ++w) {
            bool result = false;
            const auto t = run(check_agent(unfold_view(pool[b], w, k), &result), pool[a], v, 100000);
            ASSERT_EQ(t.status, RunStatus::Stopped);
            ASSERT_EQ(result, node_views_equal(pool[a], v, pool[b], w, k));
            ASSERT_EQ(t.final_node(), v);
          }
}

TEST(FindSuccess, PendantOfC3IsFirstMember) {
  const auto c = c_family();
  SuccessPoint found;
  const Agent a{"fs", [&](Walker& w) { found = find_success(w, c); }};
  const auto t = run(a, build_c(3), c_pendant(3), 100000);
  ASSERT_EQ(t.status, RunStatus::Stopped);
  EXPECT_EQ(found.index, 1);
  EXPECT_EQ(c.member(1).degree(found.node), 1);
  expect_checks_restore_position(t);
}

TEST(FindSuccess, HubOfC4IsSecondMember) {
  const auto c = c_family();
  SuccessPoint found;
  const Agent a{"fs", [&](Walker& w) { found = find_success(w, c); }};
  const auto t = run(a, build_c(4), c_hub(4), 100000);
  ASSERT_EQ(t.status, RunStatus::Stopped);
  EXPECT_EQ(found.index, 2);
  EXPECT_EQ(found.witness, *c.witness(2, found.node));
  expect_checks_restore_position(t);
}

// A non-member never yields success: the scan either runs out of steps or
// walks past the indices that carry witnesses.
TEST(FindSuccess, NonMemberNeverStops) {
  const auto t = run(Agent{"fs", [](Walker& w) { find_success(w, c_family()); }}, build_clockwise_ring(5), 0, 20000);
  EXPECT_NE(t.status, RunStatus::Stopped);
  if (t.status == RunStatus::Faulted) {
    EXPECT_NE(t.fault.find("no witness"), std::string::npos) << t.fault;
  }
  const auto short_run =
      run(Agent{"fs", [](Walker& w) { find_success(w, c_family()); }}, build_clockwise_ring(5), 0, 50);
  EXPECT_EQ(short_run.status, RunStatus::StepLimit);
}

TEST(Explo, CPrefixFromEveryStart) {
  const auto c = c_family();
  const auto agent = explo_agent(c);
  for (int i = 1; i <= 8; ++i) {
    const auto& g = c.member(i);
    for (NodeId s = 0; s < g.size(); ++s) {
      const auto t = run(agent, g, s, 1000000);
      ASSERT_EQ(t.status, RunStatus::Stopped) << i << " " << s;
      ASSERT_TRUE(is_full_exploration(t, g));
      expect_checks_restore_position(t);
    }
  }
}

TEST(Explo, TreePrefixFromEveryStart) {
  const auto trees = tree_family();
  const auto agent = explo_agent(trees);
  for (int i = 1; i <= 8; ++i) {
    const auto& g = trees.member(i);
    for (NodeId s = 0; s < g.size(); ++s) {
      const auto t = run(agent, g, s, 1000000);
      ASSERT_EQ(t.status, RunStatus::Stopped) << i << " " << s;
      ASSERT_TRUE(is_full_exploration(t, g));
      expect_checks_restore_position(t);
    }
  }
}

TEST(Explo, ExploreMarkCarriesTheBound) {
  const auto t = run(explo_agent(c_family()), build_c(4), 0, 1000000);
  ASSERT_FALSE(t.marks.empty());
  EXPECT_EQ(t.marks.back().label, "explore:M=5");
}

TEST(AF, ExploresEveryCkWithinBudget) {
  for (int k = 3; k <= 12; ++k) {
    const auto g = build_c(k);
    for (NodeId s = 0; s < g.size(); ++s) {
      const auto t = run(a_f_agent(), g, s, 2 * k + 2);
      ASSERT_EQ(t.status, RunStatus::Stopped) << k << " " << s;
      ASSERT_TRUE(is_full_exploration(t, g)) << k << " " << s;
    }
  }
}

TEST(GoAround, EndsOnPortThreeAtTheHub) {
  for (int j : {1, 3}) {
    const auto g = build_d(j);
    const auto t = run(go_around_agent(), g, d_antipode(j), 100000);
    ASSERT_EQ(t.status, RunStatus::Stopped);
    EXPECT_EQ(t.steps.back().exit_port, 3);
    EXPECT_TRUE(is_full_exploration(t, g));
  }
}

TEST(AFstar, ExploresPrefixesFromEveryStart) {
  for (int r : {0, 2, 5}) {
    const auto f = fstar_family(r);
    const auto agent = a_fstar_agent(r);
    for (int i = 1; i <= 8; ++i) {
      const auto& g = f.member(i);
      for (NodeId s = 0; s < g.size(); ++s) {
        const auto t = run(agent, g, s, 1000000);
        ASSERT_EQ(t.status, RunStatus::Stopped) << r << " " << i << " " << s;
        ASSERT_TRUE(is_full_exploration(t, g)) << r << " " << i << " " << s;
      }
    }
  }
  EXPECT_THROW(a_fstar_agent(-1), InvalidParameter);
}
