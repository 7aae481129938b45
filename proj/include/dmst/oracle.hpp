#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "dmst/graph.hpp"
#include "dmst/static_mst.hpp"

namespace dmst {

// Ground truth for every dynamic structure: recompute from scratch, scan
// everything. Clarity over speed throughout; nothing here is benchmarked.
namespace oracle {

// MST edge set after changing one weight, by full Kruskal on a copy.
inline std::vector<EdgeIx> recompute_after(const WeightedGraph& g, EdgeIx e, double new_weight) {
  WeightedGraph copy = g;
  copy.set_weight(e, new_weight);  // throws if distinctness breaks
  return kruskal(copy).edges();
}

// Minimum-weight non-tree edge crossing the cut opened by removing tree edge
// e; nullopt iff e is a bridge.
inline std::optional<EdgeIx> min_replacement_for_tree_edge(const WeightedGraph& g,
                                                           const SpanningTree& t, EdgeIx e) {
  if (!t.contains(e)) throw Error("min_replacement: '" + g.edge(e).id + "' is not a tree edge");
  auto side = t.side_after_removing(e, g.edge(e).u);
  EdgeIx best = kNoEdge;
  for (EdgeIx f = 0; f < g.edge_count(); ++f) {
    if (f == e || t.contains(f)) continue;
    const auto& ed = g.edge(f);
    if (side[ed.u] == side[ed.v]) continue;
    if (best == kNoEdge || g.weight(f) < g.weight(best)) best = f;
  }
  if (best == kNoEdge) return std::nullopt;
  return best;
}

// Heaviest tree edge on the cycle induced by non-tree edge f.
inline EdgeIx max_tree_edge_on_cycle(const WeightedGraph& g, const SpanningTree& t, EdgeIx f) {
  auto cyc = fundamental_cycle(g, t, f);  // rejects tree edges
  EdgeIx best = cyc.front();
  for (EdgeIx e : cyc)
    if (g.weight(e) > g.weight(best)) best = e;
  return best;
}

}  // namespace oracle
}  // namespace dmst
