#pragma once

#include <cmath>
#include <random>
#include <string>

#include "dmst/graph.hpp"

namespace dmst {

// Seeded graph generators. Weight = (integer draw) + index/1024, which keeps
// all weights pairwise distinct: equal fractional parts force equal indices.
// Randomness goes through raw mt19937_64 draws with explicit modulo so output
// is identical across platforms.

enum class GraphKind { Random, Path, Star, Grid };

inline GraphKind parse_graph_kind(const std::string& s) {
  if (s == "random") return GraphKind::Random;
  if (s == "path") return GraphKind::Path;
  if (s == "star") return GraphKind::Star;
  if (s == "grid") return GraphKind::Grid;
  throw Error("unknown graph kind '" + s + "' (want random|path|star|grid)");
}

inline WeightedGraph generate_graph(GraphKind kind, int n, int m, std::uint64_t seed) {
  if (n < 1) throw Error("generate: need n >= 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t bound) { return static_cast<int>(rng() % bound); };

  WeightedGraph g(n);
  int ix = 0;
  auto add = [&](Vertex u, Vertex v, double base) {
    if (ix >= 1024) throw Error("generate: more than 1023 edges breaks weight distinctness");
    g.add_edge("e" + std::to_string(ix), u, v, base + ix / 1024.0);
    ++ix;
  };

  switch (kind) {
    case GraphKind::Path: {
      if (m != 0 && m != n - 1) throw Error("generate: path has exactly n-1 edges");
      // weights increase along the path
      for (Vertex v = 0; v + 1 < n; ++v) add(v, v + 1, v + 1);
      break;
    }
    case GraphKind::Star: {
      if (m != 0 && m != n - 1) throw Error("generate: star has exactly n-1 edges");
      for (Vertex v = 1; v < n; ++v) add(0, v, v);
      break;
    }
    case GraphKind::Grid: {
      int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      if (side * side != n) throw Error("generate: grid needs a square vertex count");
      int expect = 2 * side * (side - 1);
      if (m != 0 && m != expect)
        throw Error("generate: grid on " + std::to_string(n) + " vertices has " +
                    std::to_string(expect) + " edges");
      for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
          if (c + 1 < side) add(r * side + c, r * side + c + 1, 1 + draw(1000000));
          if (r + 1 < side) add(r * side + c, (r + 1) * side + c, 1 + draw(1000000));
        }
      break;
    }
    case GraphKind::Random: {
      if (m < n - 1) throw Error("generate: random graph needs m >= n-1 for connectivity");
      // spanning-tree skeleton first, then extra edges (parallels allowed)
      for (Vertex v = 1; v < n; ++v) add(draw(v), v, 1 + draw(1000000));
      for (int k = n - 1; k < m; ++k) {
        Vertex u = draw(n), v = draw(n);
        while (u == v) v = draw(n);
        add(u, v, 1 + draw(1000000));
      }
      break;
    }
  }
  return g;
}

}  // namespace dmst
