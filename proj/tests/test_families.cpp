#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "xfam/xfam.hpp"

using namespace xfam;

TEST(Family, CMembersAndSizes) {
  const auto c = c_family();
  EXPECT_EQ(c.name(), "c");
  for (int i = 1; i <= 6; ++i) {
    EXPECT_TRUE(port_isomorphic(c.member(i), build_c(i + 2)));
    EXPECT_EQ(c.size(i), c.member(i).size());
  }
  EXPECT_THROW(c.member(0), InvalidParameter);
  EXPECT_TRUE(c.has_witnesses());
  EXPECT_FALSE(c.has_counterexamples());
}

TEST(Family, FstarSwitchesToDAfterR) {
  const auto f = fstar_family(2);
  EXPECT_TRUE(port_isomorphic(f.member(1), build_c(3)));
  EXPECT_TRUE(port_isomorphic(f.member(2), build_c(4)));
  EXPECT_TRUE(port_isomorphic(f.member(3), build_d(3)));
  EXPECT_EQ(f.size(3), 25);
  for (int i = 1; i <= 5; ++i) EXPECT_EQ(f.size(i), f.member(i).size());
  EXPECT_TRUE(port_isomorphic(fstar_family(0).member(1), build_d(1)));
  EXPECT_THROW(fstar_family(-1), InvalidParameter);
}

TEST(Family, MembershipPredicatesMatchMembers) {
  const auto f = fstar_family(2);
  for (int i = 1; i <= 5; ++i) EXPECT_TRUE(in_fstar_family(2, f.member(i)));
  EXPECT_FALSE(in_fstar_family(2, build_c(5)));
  EXPECT_FALSE(in_fstar_family(2, build_d(2)));
  EXPECT_TRUE(in_c_family(build_c(9)));
  EXPECT_FALSE(in_c_family(build_d(1)));
  EXPECT_FALSE(in_c_family(build_clockwise_ring(4)));
}

TEST(Family, TreeMembersInCanonicalOrder) {
  const auto t = tree_family();
  int last_size = 0;
  CanonicalCode last;
  for (int i = 1; i <= 66; ++i) {
    const auto& g = t.member(i);
    ASSERT_TRUE(g.is_tree());
    auto code = canonical_code(g);
    if (g.size() == last_size) {
      ASSERT_LT(last, code);
    }
    ASSERT_GE(g.size(), last_size);
    last_size = g.size();
    last = std::move(code);
  }
}

TEST(Family, ByName) {
  EXPECT_EQ(family_by_name("rings").name(), "rings");
  EXPECT_EQ(family_by_name("fstar:r=3").name(), "fstar:r=3");
  EXPECT_EQ(family_by_name("all-graphs").member(1).size(), 2);
  EXPECT_THROW(family_by_name("fstar:r=x"), InvalidParameter);
  EXPECT_THROW(family_by_name("fstar:r=-1"), InvalidParameter);
  EXPECT_THROW(family_by_name("nope"), InvalidParameter);
}

TEST(RingFamily, CounterexampleSharesTheViewOverTheGrid) {
  const auto rings = ring_family();
  EXPECT_FALSE(rings.has_witnesses());
  EXPECT_FALSE(rings.witness(1, 0).has_value());
  for (int i = 1; i <= 3; ++i)
    for (NodeId v = 0; v < rings.member(i).size(); ++v)
      for (int k = 1; k <= 6; ++k)
        for (int m = 1; m <= 6; ++m) {
          const auto ce = rings.counterexample(i, v, k, m);
          ASSERT_GT(ce.index, m);
          ASSERT_TRUE(node_views_equal(rings.member(i), v, rings.member(ce.index), ce.node, k));
        }
  EXPECT_THROW(c_family().counterexample(1, 0, 1, 1), InvalidParameter);
}

TEST(Witness, CFamilyMeasuredRows) {
  const auto c = c_family();
  const std::vector<Witness> row1 = {{3, 1}, {2, 1}, {2, 1}, {4, 1}};
  for (NodeId v = 0; v < 4; ++v) EXPECT_EQ(*c.witness(1, v), row1[v]) << v;
  const std::vector<Witness> row2 = {{4, 2}, {3, 2}, {2, 2}, {3, 2}, {5, 2}};
  for (NodeId v = 0; v < 5; ++v) EXPECT_EQ(*c.witness(2, v), row2[v]) << v;
}

TEST(Witness, MatchesDoubleLoopOnC) {
  const auto c = c_family();
  const auto b = c.witness_bounds();
  for (int i = 1; i <= 4; ++i)
    for (NodeId v = 0; v < c.member(i).size(); ++v)
      ASSERT_EQ(find_witness(c, i, v, b), oracle::brute_witness(c, i, v, b.max_depth, b.max_range, b.horizon))
          << i << " " << v;
}

// Tree witnesses against the brute oracle on a reduced horizon (all trees of
// size <= 6), then against the closed form (ecc(v), i) at full bounds.
TEST(Witness, MatchesDoubleLoopOnTrees) {
  const auto t = tree_family();
  const WitnessBounds reduced{8, 17, 66};
  for (int i = 1; i <= 6; ++i)
    for (NodeId v = 0; v < t.member(i).size(); ++v)
      ASSERT_EQ(find_witness(t, i, v, reduced), oracle::brute_witness(t, i, v, 8, 17, 66)) << i << " " << v;
  for (int i = 1; i <= 6; ++i)
    for (NodeId v = 0; v < t.member(i).size(); ++v)
      ASSERT_EQ(*t.witness(i, v), (Witness{oracle::eccentricity(t.member(i), v), i})) << i << " " << v;
}

TEST(Witness, K2NodesBothOneOne) {
  const auto t = tree_family();
  EXPECT_EQ(*t.witness(1, 0), (Witness{1, 1}));
  EXPECT_EQ(*t.witness(1, 1), (Witness{1, 1}));
}

TEST(Witness, IndexBeyondBoundsHasNone) {
  const auto c = c_family();
  EXPECT_FALSE(find_witness(c, 25, 0, c.witness_bounds()).has_value());
  EXPECT_THROW(find_witness(c, 1, 9, c.witness_bounds()), InvalidParameter);
}

TEST(VerifyWitnessPrefix, Examples) {
  const auto c = c_family();
  EXPECT_TRUE(verify_witness_prefix(c, 1, 0, 3, 1, 30));
  EXPECT_FALSE(verify_witness_prefix(c, 1, 0, 2, 1, 30));
  EXPECT_FALSE(verify_witness_prefix(ring_family(), 1, 0, 5, 1, 10));
  // The witness is the least passing pair.
  for (int i = 1; i <= 3; ++i)
    for (NodeId v = 0; v < c.member(i).size(); ++v) {
      const auto w = *c.witness(i, v);
      EXPECT_TRUE(verify_witness_prefix(c, i, v, w.depth, w.range, 30));
      if (w.range > 1) {
        EXPECT_FALSE(verify_witness_prefix(c, i, v, w.depth, w.range - 1, 30));
      }
      if (w.depth > 1) {
        EXPECT_FALSE(verify_witness_prefix(c, i, v, w.depth - 1, 20, 30));
      }
    }
}

TEST(WitnessTable, SaveAndLoad) {
  const auto path = (std::filesystem::temp_directory_path() / "xfam_witness_table.txt").string();
  const auto c = c_family();
  for (NodeId v = 0; v < 4; ++v) c.witness(1, v);
  save_witness_table(c, path);
  const auto fresh = c_family();
  EXPECT_EQ(load_witness_table(fresh, path), 4);
  EXPECT_EQ(fresh.cached_witnesses().size(), 4u);
  EXPECT_EQ(*fresh.witness(1, 3), (Witness{4, 1}));
  // Rows for another family are skipped.
  EXPECT_EQ(load_witness_table(tree_family(), path), 0);
  std::filesystem::remove(path);
}
