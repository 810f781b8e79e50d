#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xfam/xfam.hpp"

using namespace xfam;

namespace {

// 1-based position of g's class in the all-graphs listing.
int all_graphs_index(const PortGraph& g) {
  const auto code = canonical_code(g);
  for (int j = 1;; ++j)
    if (canonical_code(enumerate_all_graphs(j)) == code) return j;
}

int count_schema(const Trace& t, const std::string& schema) {
  int n = 0;
  for (const auto& q : t.queries) n += q.request.rfind(schema + " ", 0) == 0;
  return n;
}

}  // namespace

TEST(OracleBackend, MemberIsomorphicExamples) {
  const auto backend = oracle_backend(c_family());
  EXPECT_TRUE(backend.answer(Query{schema::kMemberIsomorphic, {1}, build_c(3), {}}));
  EXPECT_TRUE(backend.answer(Query{schema::kMemberIsomorphic, {1}, oracle::relabel(build_c(3), {3, 1, 0, 2}), {}}));
  EXPECT_FALSE(backend.answer(Query{schema::kMemberIsomorphic, {2}, build_c(3), {}}));
  EXPECT_FALSE(backend.answer(Query{schema::kMemberIsomorphic, {1}, build_clockwise_ring(4), {}}));
  EXPECT_THROW(backend.answer(Query{schema::kMemberIsomorphic, {1}, std::nullopt, {}}), OracleFault);
}

TEST(OracleBackend, DepthWitnessHasExactlyOneYes) {
  const auto c = c_family();
  const auto backend = oracle_backend(c);
  for (int i = 1; i <= 3; ++i)
    for (long long label = 0; label < c.size(i); ++label) {
      int yes = 0;
      for (int j = 1; j <= 40; ++j) yes += backend.answer(Query{schema::kDepthWitness, {i, label, j}, std::nullopt, {}});
      EXPECT_EQ(yes, 1);
    }
}

TEST(OracleBackend, ExtensionsAndFaults) {
  auto backend = oracle_backend(c_family());
  EXPECT_TRUE(backend.answer(Query{schema::kSizeAtMost, {2, 5}, std::nullopt, {}}));
  EXPECT_FALSE(backend.answer(Query{schema::kSizeAtMost, {3, 5}, std::nullopt, {}}));
  EXPECT_TRUE(backend.answer(Query{schema::kCodeSymbol, {1, 0, 4}, std::nullopt, {}}));
  EXPECT_FALSE(backend.answer(Query{schema::kCodeSymbol, {1, 100000, 0}, std::nullopt, {}}));
  EXPECT_THROW(backend.answer(Query{"nonsense", {}, std::nullopt, {}}), OracleFault);
  EXPECT_THROW(backend.answer(Query{schema::kDepthWitness, {1, 9, 1}, std::nullopt, {}}), OracleFault);
  backend.register_schema("even-index", [](const Family&, const Query& q) { return q.params.at(0) % 2 == 0; });
  EXPECT_TRUE(backend.answer(Query{"even-index", {4}, std::nullopt, {}}));
  const auto no_witnesses = oracle_backend(fstar_family(1));
  EXPECT_THROW(no_witnesses.answer(Query{schema::kDepthWitness, {1, 0, 1}, std::nullopt, {}}), OracleFault);
}

TEST(FindIthGraph, QueryCountIsTheListingIndex) {
  const auto c = c_family();
  const auto backend = oracle_backend(c);
  for (int i = 1; i <= 2; ++i) {
    PortGraph got{PortGraph::Adjacency{}};
    const auto t = run(Agent{"q1", [&](Walker& w) { got = find_ith_graph(w, i); }}, build_c(3), 0, 0, backend.hooks());
    ASSERT_EQ(t.status, RunStatus::Stopped);
    EXPECT_TRUE(port_isomorphic(got, c.member(i)));
    EXPECT_EQ(count_schema(t, schema::kMemberIsomorphic), all_graphs_index(c.member(i)));
  }
}

TEST(FindIthGraph, ReadsCodeBeyondTheCap) {
  const auto c = c_family();
  PortGraph got{PortGraph::Adjacency{}};
  const auto t =
      run(Agent{"q1", [&](Walker& w) { got = find_ith_graph(w, 4); }}, build_c(3), 0, 0, oracle_backend(c).hooks());
  ASSERT_EQ(t.status, RunStatus::Stopped);
  EXPECT_EQ(got, graph_from_code(canonical_code(c.member(4))));
  EXPECT_EQ(count_schema(t, schema::kMemberIsomorphic), 0);
  EXPECT_GT(count_schema(t, schema::kCodeSymbol), 0);
}

// Witness values learned through queries, keyed by canonical labels.
TEST(FindWitnessQueries, MatchTheLibraryValues) {
  const auto c = c_family();
  const auto backend = oracle_backend(c);
  for (int i = 1; i <= 3; ++i) {
    const auto labeling = canonical_labeling(c.member(i));
    for (NodeId v = 0; v < c.size(i); ++v) {
      int depth = 0, range = 0;
      run(Agent{"q2q3",
                [&](Walker& w) {
                  depth = find_depth_witness(w, labeling[v], i);
                  range = find_range_witness(w, labeling[v], i);
                }},
          build_c(3), 0, 0, backend.hooks());
      EXPECT_EQ((Witness{depth, range}), *c.witness(i, v));
    }
  }
}

TEST(UniversalAgent, ExploresCPrefixAndMatchesExplo) {
  const auto c = c_family();
  const auto backend = oracle_backend(c);
  const auto agent = universal_exploration_agent("c");
  for (int i = 1; i <= 4; ++i) {
    const auto& g = c.member(i);
    for (NodeId s = 0; s < g.size(); ++s) {
      const auto t = run(agent, g, s, 1000000, backend.hooks());
      ASSERT_EQ(t.status, RunStatus::Stopped) << t.fault;
      ASSERT_TRUE(is_full_exploration(t, g));
      ASSERT_TRUE(replay_oracle_log(t, backend));
      ASSERT_EQ(t.final_node(), run(explo_agent(c), g, s, 1000000).final_node());
      for (const char* name : {schema::kMemberIsomorphic, schema::kDepthWitness, schema::kRangeWitness})
        ASSERT_GT(count_schema(t, name), 0) << name;
    }
  }
}

TEST(UniversalAgent, ExploresSmallTrees) {
  const auto trees = tree_family();
  const auto backend = oracle_backend(trees);
  for (int i = 1; i <= 6; ++i) {
    const auto& g = trees.member(i);
    for (NodeId s = 0; s < g.size(); ++s) {
      const auto t = run(universal_exploration_agent("trees"), g, s, 1000000, backend.hooks());
      ASSERT_EQ(t.status, RunStatus::Stopped) << t.fault;
      ASSERT_TRUE(is_full_exploration(t, g));
      ASSERT_TRUE(replay_oracle_log(t, backend));
    }
  }
}

TEST(UniversalAgent, FaultsWhenTheFamilyHasNoWitnesses) {
  const auto t = run(universal_exploration_agent(), build_c(3), 0, 10000, oracle_backend(fstar_family(1)).hooks());
  EXPECT_EQ(t.status, RunStatus::Faulted);
}

TEST(ParseQuery, RoundTripsDescribe) {
  const Query plain{schema::kRangeWitness, {2, 1, 3}, std::nullopt, {}};
  const auto back = parse_query(plain.describe());
  EXPECT_EQ(back.schema, plain.schema);
  EXPECT_EQ(back.params, plain.params);
  const Query with_code{schema::kMemberIsomorphic, {1}, build_c(3), {}};
  EXPECT_TRUE(port_isomorphic(*parse_query(with_code.describe()).graph, build_c(3)));
  EXPECT_TRUE(port_isomorphic(*parse_query("member-isomorphic 1 H1").graph, PortGraph({{HalfEdge{1, 0}}, {HalfEdge{0, 0}}})));
}
