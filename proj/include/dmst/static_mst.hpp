#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "dmst/graph.hpp"

namespace dmst {

struct UnionFind {
  std::vector<int> parent, rank_;

  explicit UnionFind(int n) : parent(n), rank_(n, 0) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  // true iff the roots differed and were united
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }
};

// Unique MST by nondecreasing-weight scan with union-find cycle detection.
// `addition_trace`, when given, receives edges in the order they entered.
inline SpanningTree kruskal(const WeightedGraph& g, std::vector<EdgeIx>* addition_trace = nullptr) {
  int n = g.vertex_count();
  std::vector<EdgeIx> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](EdgeIx a, EdgeIx b) { return g.weight(a) < g.weight(b); });

  UnionFind uf(n);
  std::vector<EdgeIx> chosen;
  for (EdgeIx e : order) {
    const auto& ed = g.edge(e);
    if (uf.unite(ed.u, ed.v)) {
      chosen.push_back(e);
      if (addition_trace) addition_trace->push_back(e);
    }
  }
  if (static_cast<int>(chosen.size()) != n - 1) {
    // name one vertex from each of two distinct components
    int r0 = uf.find(0);
    for (Vertex v = 1; v < n; ++v)
      if (uf.find(v) != r0)
        throw Error("graph is disconnected: no path between vertices " + std::to_string(0) +
                    " and " + std::to_string(v));
    throw Error("graph is disconnected");
  }
  return SpanningTree(g, chosen);
}

// Prim's greedy growth from `start`. The queue only needs decrease-key, so an
// ordered set of (key, vertex) pairs serves as the addressable heap.
inline SpanningTree prim(const WeightedGraph& g, Vertex start,
                         std::vector<EdgeIx>* addition_trace = nullptr) {
  int n = g.vertex_count();
  if (start < 0 || start >= n) throw Error("prim: start vertex out of range");

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(n, inf);
  std::vector<EdgeIx> via(n, kNoEdge);
  std::vector<char> done(n, 0);
  std::set<std::pair<double, Vertex>> pq;
  key[start] = 0;
  pq.insert({0.0, start});

  std::vector<EdgeIx> chosen;
  while (!pq.empty()) {
    auto [k, x] = *pq.begin();
    pq.erase(pq.begin());
    done[x] = 1;
    if (via[x] != kNoEdge) {
      chosen.push_back(via[x]);
      if (addition_trace) addition_trace->push_back(via[x]);
    }
    for (auto [y, e] : g.incident(x)) {
      if (done[y]) continue;
      double w = g.weight(e);
      if (w < key[y]) {
        pq.erase({key[y], y});
        key[y] = w;
        via[y] = e;
        pq.insert({w, y});
      }
    }
  }
  if (static_cast<int>(chosen.size()) != n - 1) {
    for (Vertex v = 0; v < n; ++v)
      if (!done[v])
        throw Error("graph is disconnected: no path between vertices " + std::to_string(start) +
                    " and " + std::to_string(v));
  }
  return SpanningTree(g, chosen);
}

}  // namespace dmst
