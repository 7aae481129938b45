#include <gtest/gtest.h>

#include <map>
#include <random>

#include "dmst/generate.hpp"
#include "dmst/oracle.hpp"
#include "dmst/responsibility.hpp"
#include "test_util.hpp"

using namespace dmst;
using testutil::edge_set;

// Every structural promise of the index, checked against first principles.
static void check_invariants(const ResponsibilityIndex& idx) {
  const WeightedGraph& g = idx.graph();
  const SpanningTree& t = idx.tree();

  // tree is the MST of the current weights
  ASSERT_EQ(edge_set(t.edges()), edge_set(kruskal(g).edges()));

  // index order matches current weights, strictly increasing
  auto order = idx.inorder_edges();
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    ASSERT_LT(g.weight(order[i]), g.weight(order[i + 1]));

  EdgeBitset seen(g.edge_count());
  for (EdgeIx j : order) {
    ASSERT_FALSE(t.contains(j));
    // C is the live fundamental cycle
    EdgeBitset cyc(g.edge_count());
    for (EdgeIx e : fundamental_cycle(g, t, j)) cyc.set(e);
    ASSERT_EQ(idx.cycle_set(j), cyc) << "stale cycle set on " << g.edge(j).id;
    // N within C, and the N sets are disjoint
    EdgeBitset n = idx.resp_set(j);
    EdgeBitset inC = n;
    inC.subtract(cyc);
    ASSERT_TRUE(inC.empty()) << "N escapes C on " << g.edge(j).id;
    EdgeBitset overlap = n;
    overlap &= seen;
    ASSERT_TRUE(overlap.empty()) << "overlapping responsibility";
    seen |= n;
    // f_nontree is the heaviest member of N
    EdgeIx mx = idx.max_responsibility(j);
    if (n.empty())
      ASSERT_EQ(mx, kNoEdge);
    else
      n.for_each([&](int e) { ASSERT_LE(g.weight(e), g.weight(mx)); });
  }

  // f_tree: exactly the oracle's minimum replacement, bridges uncovered
  for (EdgeIx e : t.edges()) {
    auto want = oracle::min_replacement_for_tree_edge(g, t, e);
    EXPECT_EQ(idx.responsible_for(e), want.value_or(kNoEdge)) << "cover of " << g.edge(e).id;
    if (want) EXPECT_TRUE(idx.resp_set(*want).test(e)) << "N misses covered edge";
  }

  // the N sets partition exactly the covered tree edges
  for (EdgeIx e = 0; e < g.edge_count(); ++e) {
    bool covered = t.contains(e) && idx.responsible_for(e) != kNoEdge;
    ASSERT_EQ(seen.test(e), covered);
  }

  // L/R equal recomputed subtree unions
  std::map<EdgeIx, ResponsibilityIndex::NodeView> shape;
  for (const auto& nv : idx.structure()) shape[nv.edge] = nv;
  auto subtree_union = [&](auto&& self, EdgeIx at) -> EdgeBitset {
    EdgeBitset acc(g.edge_count());
    if (at == kNoEdge) return acc;
    const auto& nv = shape.at(at);
    acc |= idx.resp_set(at);
    acc |= self(self, nv.left);
    acc |= self(self, nv.right);
    return acc;
  };
  for (const auto& [edge, nv] : shape) {
    ASSERT_EQ(idx.left_set(edge), subtree_union(subtree_union, nv.left));
    ASSERT_EQ(idx.right_set(edge), subtree_union(subtree_union, nv.right));
  }
}

TEST(RespIndex, TriangleInitialize) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  // the only non-tree edge takes the whole tree
  EdgeBitset c = idx.cycle_set(2);
  EXPECT_TRUE(c.test(0) && c.test(1) && c.count() == 2);
  EXPECT_EQ(idx.responsible_for(0), 2);
  EXPECT_EQ(idx.responsible_for(1), 2);
  EXPECT_EQ(idx.max_responsibility(2), 1);  // the w=2 edge
  check_invariants(idx);
}

TEST(RespIndex, PathHasEmptyIndex) {
  WeightedGraph g = generate_graph(GraphKind::Path, 5, 0, 0);
  ResponsibilityIndex idx(g, kruskal(g));
  EXPECT_TRUE(idx.inorder_edges().empty());
  for (EdgeIx e = 0; e < g.edge_count(); ++e) EXPECT_EQ(idx.responsible_for(e), kNoEdge);
}

TEST(RespIndex, RejectsNonMst) {
  WeightedGraph g = testutil::triangle();
  SpanningTree bad(g, {0, 2});
  EXPECT_THROW(ResponsibilityIndex(g, bad), Error);
}

TEST(RespIndex, InitializeMatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    WeightedGraph g = generate_graph(GraphKind::Random, 12, 30, seed);
    ResponsibilityIndex idx(g, kruskal(g));
    check_invariants(idx);
  }
}

TEST(RespIndex, TreeDecreaseIsCase3) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  auto out = idx.apply_update(1, -0.5);
  EXPECT_EQ(out.kind, UpdateOutcome::Unchanged);
  EXPECT_EQ(edge_set(idx.tree().edges()), (std::set<EdgeIx>{0, 1}));
  check_invariants(idx);
}

TEST(RespIndex, NontreeIncreaseIsCase2) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  auto out = idx.apply_update(2, 10.0);
  EXPECT_EQ(out.kind, UpdateOutcome::Unchanged);
  EXPECT_EQ(edge_set(idx.tree().edges()), (std::set<EdgeIx>{0, 1}));
  check_invariants(idx);
}

TEST(RespIndex, DecreaseAboveCycleMaxKeepsTree) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  auto out = idx.decrease_nontree(2, 2.5);  // still above the w=2 tree edge
  EXPECT_EQ(out.kind, UpdateOutcome::Unchanged);
  EXPECT_EQ(edge_set(idx.tree().edges()), (std::set<EdgeIx>{0, 1}));
  check_invariants(idx);
}

TEST(RespIndex, DecreaseBelowCycleMaxSwaps) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  auto out = idx.decrease_nontree(2, 1.5);
  EXPECT_EQ(out, UpdateOutcome::swapped(1, 2));
  EXPECT_EQ(edge_set(idx.tree().edges()), (std::set<EdgeIx>{0, 2}));
  EXPECT_EQ(edge_set(idx.tree().edges()), edge_set(oracle::recompute_after(g, 2, 1.5)));
  check_invariants(idx);
}

TEST(RespIndex, DecreaseRejectsTreeEdge) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  EXPECT_THROW(idx.decrease_nontree(0, 0.5), Error);
}

TEST(RespIndex, BridgeRaisedToSentinelStays) {
  // triangle plus a pendant bridge
  WeightedGraph g = load_graph("4 4\n0 1 1.0 e0\n1 2 2.0 e1\n0 2 3.0 e2\n2 3 4.0 b\n");
  ResponsibilityIndex idx(g, kruskal(g));
  EdgeIx b = g.find_edge("b");
  EXPECT_EQ(idx.responsible_for(b), kNoEdge);
  auto out = idx.increase_tree(b, sentinel_weight(b));
  EXPECT_EQ(out.kind, UpdateOutcome::Unchanged);
  EXPECT_TRUE(idx.tree().contains(b));
  check_invariants(idx);
}

// The swap test for a dropping non-tree edge must use the heaviest edge on
// the full cycle set; the heaviest edge of N alone misses mandatory swaps
// when a lighter non-tree edge owns part of the cycle.
TEST(RespIndex, DecreaseChecksFullCycleNotJustN) {
  WeightedGraph g(3);
  EdgeIx a = g.add_edge("a", 0, 1, 1.0);
  EdgeIx emax = g.add_edge("emax", 1, 2, 4.0);
  EdgeIx k = g.add_edge("k", 1, 2, 5.0);  // parallel, owns emax after init
  EdgeIx j = g.add_edge("j", 0, 2, 6.0);
  ResponsibilityIndex idx(g, kruskal(g));
  ASSERT_EQ(idx.responsible_for(emax), k);
  ASSERT_EQ(idx.max_responsibility(j), a);  // N_j = {a} only
  auto out = idx.decrease_nontree(j, 3.0);  // N-max test would say "no change"
  EXPECT_EQ(out, UpdateOutcome::swapped(emax, j));
  EXPECT_EQ(edge_set(idx.tree().edges()), edge_set(oracle::recompute_after(g, j, 3.0)));
  check_invariants(idx);
}

// id-level reconstruction of the worked example: tree edges of weights
// 1,2,2,4 (ids a,b,c,d), non-tree edges of weights 6,7. Raising d to 9 makes
// the weight-6 edge enter, and the weight-7 edge's cycle set moves by
// {a,b,c,d} symmetric-difference {b,c,d,j6} = {a,j6} -- weights {1,6}.
TEST(RespIndex, WorkedExampleSymmetricDifference) {
  WeightedGraph g(5);
  EdgeIx a = g.add_edge("a", 0, 1, 1.0);
  EdgeIx b = g.add_edge("b", 1, 2, 2.0);
  EdgeIx c = g.add_edge("c", 2, 3, 2.2);  // the second "2": same printed weight class, own id
  EdgeIx d = g.add_edge("d", 3, 4, 4.0);
  EdgeIx j6 = g.add_edge("j6", 1, 4, 6.0);
  EdgeIx j7 = g.add_edge("j7", 0, 4, 7.0);
  ResponsibilityIndex idx(g, kruskal(g));
  ASSERT_EQ(edge_set(idx.tree().edges()), (std::set<EdgeIx>{a, b, c, d}));
  ASSERT_EQ(idx.responsible_for(d), j6);
  {
    EdgeBitset c7 = idx.cycle_set(j7);
    EXPECT_EQ(edge_set(c7.to_vector()), (std::set<EdgeIx>{a, b, c, d}));
  }

  auto out = idx.increase_tree(d, 9.0);
  EXPECT_EQ(out, UpdateOutcome::swapped(d, j6));

  // {a,b,c,d} delta {b,c,d,j6} = {a,j6}
  EXPECT_EQ(edge_set(idx.cycle_set(j7).to_vector()), (std::set<EdgeIx>{a, j6}));
  EXPECT_EQ(edge_set(idx.resp_set(j7).to_vector()), (std::set<EdgeIx>{a, j6}));
  // the evicted edge becomes a non-tree node with cycle {b,c,j6}
  EXPECT_EQ(edge_set(idx.cycle_set(d).to_vector()), (std::set<EdgeIx>{b, c, j6}));
  EXPECT_EQ(edge_set(idx.resp_set(d).to_vector()), (std::set<EdgeIx>{b, c}));
  EXPECT_EQ(idx.responsible_for(j6), j7);
  check_invariants(idx);
}

TEST(RespIndex, UpdateAfterSwapOrderingErrors) {
  WeightedGraph g = testutil::triangle();
  ResponsibilityIndex idx(g, kruskal(g));
  // neither edge has moved yet
  EXPECT_THROW(idx.update_after_swap(1, 2), Error);
  EXPECT_THROW(idx.update_after_swap(2, 0), Error);
}

TEST(RespIndex, DumpGolden) {
  WeightedGraph g(5);
  g.add_edge("a", 0, 1, 1.0);
  g.add_edge("b", 1, 2, 2.0);
  g.add_edge("c", 2, 3, 2.2);
  g.add_edge("d", 3, 4, 4.0);
  g.add_edge("j6", 1, 4, 6.0);
  g.add_edge("j7", 0, 4, 7.0);
  ResponsibilityIndex idx(g, kruskal(g));
  EXPECT_EQ(idx.dump(),
            "node j6 w=6 C=[b,c,d] N=[b,c,d] L=[] R=[a]\n"
            "  node j7 w=7 C=[a,b,c,d] N=[a] L=[] R=[]\n");
}

// locality: a swap rewrites only cycle sets that contained the leaving edge
TEST(RespIndex, SwapTouchesOnlyAffectedCycles) {
  // two independent triangles sharing vertex 2
  WeightedGraph g(5);
  g.add_edge("p", 0, 1, 1.0);
  g.add_edge("q", 1, 2, 2.0);
  EdgeIx f1 = g.add_edge("f1", 0, 2, 10.0);
  g.add_edge("r", 2, 3, 3.0);
  g.add_edge("s", 3, 4, 4.0);
  EdgeIx f2 = g.add_edge("f2", 2, 4, 11.0);
  ResponsibilityIndex idx(g, kruskal(g));
  EdgeBitset before = idx.cycle_set(f2);
  idx.decrease_nontree(f1, 1.5);  // swap inside the first triangle
  EXPECT_EQ(idx.cycle_set(f2), before);
  check_invariants(idx);
}

// the long randomized soak: mixed updates with the full invariant sweep
TEST(RespIndex, RandomizedUpdateSoak) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    WeightedGraph g = generate_graph(GraphKind::Random, 12, 28, seed);
    ResponsibilityIndex idx(g, kruskal(g));
    std::mt19937_64 rng(seed * 1337);
    int applied = 0;
    for (int step = 0; step < 120; ++step) {
      EdgeIx e = static_cast<EdgeIx>(rng() % g.edge_count());
      // one move in eight deletes (sentinel); anything else is an ordinary
      // move, which doubles as re-insertion when the edge sat at the sentinel
      double target = (rng() % 8 == 0) ? sentinel_weight(e)
                                       : 1 + (rng() % 1000000) + (rng() % 1024) / 2048.0;
      std::vector<EdgeIx> expect;
      try {
        expect = oracle::recompute_after(idx.graph(), e, target);
      } catch (const Error&) {
        continue;  // weight collision, skip
      }
      auto before = edge_set(idx.tree().edges());
      auto out = idx.set_weight_update(e, target);
      ++applied;
      EXPECT_EQ(edge_set(idx.tree().edges()), edge_set(expect));
      if (out.kind == UpdateOutcome::Unchanged)
        EXPECT_EQ(edge_set(idx.tree().edges()), before);
      else {
        EXPECT_TRUE(before.count(out.out));
        EXPECT_FALSE(before.count(out.in));
      }
      if (step % 10 == 0) check_invariants(idx);
    }
    ASSERT_GT(applied, 60);
    check_invariants(idx);
  }
}

// applying a batch of updates then comparing against a fresh kruskal on the
// final weights must agree edge for edge
TEST(RespIndex, SequenceMetamorphic) {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    WeightedGraph g = generate_graph(GraphKind::Random, 10, 24, seed);
    ResponsibilityIndex idx(g, kruskal(g));
    std::mt19937_64 rng(seed);
    for (int step = 0; step < 60; ++step) {
      EdgeIx e = static_cast<EdgeIx>(rng() % g.edge_count());
      double target = 1 + (rng() % 1000000) + (rng() % 1024) / 2048.0;
      if (idx.graph().weight_in_use(target)) continue;
      idx.set_weight_update(e, target);
    }
    EXPECT_EQ(edge_set(idx.tree().edges()), edge_set(kruskal(idx.graph()).edges()));
  }
}
