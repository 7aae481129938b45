#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dmst {

using Vertex = int;
using EdgeIx = int;
inline constexpr EdgeIx kNoEdge = -1;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Ordinary weights must stay below this threshold. An edge "deleted" from the
// graph is parked at sentinel_weight(e), which compares greater than every
// admissible weight and is distinct per edge, so weight uniqueness survives
// multiple deletions. Insertion is the reverse move: a decrease from the
// sentinel down to a real weight.
inline constexpr double kSentinelBase = 0x1p50;

inline double sentinel_weight(EdgeIx e) { return kSentinelBase + static_cast<double>(e) + 1.0; }
inline bool is_sentinel(double w) { return w >= kSentinelBase; }

namespace detail {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

struct WeightedEdge {
  std::string id;
  Vertex u = 0;
  Vertex v = 0;
  double weight = 0.0;

  Vertex other(Vertex x) const { return x == u ? v : u; }
};

// Undirected multigraph with globally distinct edge weights. Self-loops are
// rejected; parallel edges are fine as long as ids and weights differ.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n) : adj_(n) {}

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  EdgeIx add_edge(std::string id, Vertex u, Vertex v, double weight) {
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
      throw Error("edge '" + id + "': vertex out of range");
    if (u == v) throw Error("edge '" + id + "': self-loop");
    if (!std::isfinite(weight) || is_sentinel(weight))
      throw Error("edge '" + id + "': weight must be finite and below the deletion sentinel");
    if (by_id_.count(id)) throw Error("duplicate edge id '" + id + "'");
    if (auto it = by_weight_.find(weight); it != by_weight_.end())
      throw Error("duplicate weight " + detail::format_double(weight) + " on edges '" +
                  edges_[it->second].id + "' and '" + id + "'");
    EdgeIx e = static_cast<EdgeIx>(edges_.size());
    by_id_.emplace(id, e);
    by_weight_.emplace(weight, e);
    adj_[u].push_back({v, e});
    adj_[v].push_back({u, e});
    edges_.push_back(WeightedEdge{std::move(id), u, v, weight});
    return e;
  }

  const WeightedEdge& edge(EdgeIx e) const { return edges_.at(e); }
  const std::vector<WeightedEdge>& edges() const { return edges_; }
  double weight(EdgeIx e) const { return edges_.at(e).weight; }

  EdgeIx find_edge(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? kNoEdge : it->second;
  }

  // Weight changes keep the distinctness guarantee; sentinels are allowed here.
  void set_weight(EdgeIx e, double w) {
    if (!(std::isfinite(w) || is_sentinel(w))) throw Error("weight must be a real number");
    WeightedEdge& ed = edges_.at(e);
    if (ed.weight == w) return;
    if (auto it = by_weight_.find(w); it != by_weight_.end())
      throw Error("duplicate weight " + detail::format_double(w) + " on edges '" +
                  edges_[it->second].id + "' and '" + ed.id + "'");
    by_weight_.erase(ed.weight);
    by_weight_.emplace(w, e);
    ed.weight = w;
  }

  bool weight_in_use(double w) const { return by_weight_.count(w) != 0; }

  const std::vector<std::pair<Vertex, EdgeIx>>& incident(Vertex v) const { return adj_.at(v); }

  bool connected() const {
    if (vertex_count() == 0) return true;
    std::vector<char> seen(vertex_count(), 0);
    std::queue<Vertex> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto [y, e] : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++cnt;
          q.push(y);
        }
    }
    return cnt == vertex_count();
  }

 private:
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<std::pair<Vertex, EdgeIx>>> adj_;
  std::unordered_map<std::string, EdgeIx> by_id_;
  std::map<double, EdgeIx> by_weight_;
};

// A spanning tree of a specific graph, held as an edge-id set plus its own
// adjacency index for path queries. The graph must outlive the tree.
class SpanningTree {
 public:
  SpanningTree(const WeightedGraph& g, const std::vector<EdgeIx>& edges) : g_(&g) {
    int n = g.vertex_count();
    in_tree_.assign(g.edge_count(), 0);
    adj_.assign(n, {});
    if (static_cast<int>(edges.size()) != n - 1)
      throw Error("spanning tree needs exactly n-1 edges, got " + std::to_string(edges.size()));
    for (EdgeIx e : edges) {
      if (e < 0 || e >= g.edge_count()) throw Error("spanning tree references unknown edge");
      if (in_tree_[e]) throw Error("spanning tree lists edge '" + g.edge(e).id + "' twice");
      in_tree_[e] = 1;
      link(e);
    }
    if (!spans()) throw Error("edge set is not a spanning tree");
  }

  const WeightedGraph& graph() const { return *g_; }

  bool contains(EdgeIx e) const { return e >= 0 && e < static_cast<int>(in_tree_.size()) && in_tree_[e]; }

  std::vector<EdgeIx> edges() const {
    std::vector<EdgeIx> out;
    for (EdgeIx e = 0; e < static_cast<int>(in_tree_.size()); ++e)
      if (in_tree_[e]) out.push_back(e);
    return out;
  }

  double total_weight() const {
    double s = 0;
    for (EdgeIx e = 0; e < static_cast<int>(in_tree_.size()); ++e)
      if (in_tree_[e]) s += g_->weight(e);
    return s;
  }

  const std::vector<std::pair<Vertex, EdgeIx>>& tree_incident(Vertex v) const { return adj_.at(v); }

  // Tree edges on the unique path between a and b.
  std::vector<EdgeIx> path_edges(Vertex a, Vertex b) const {
    int n = static_cast<int>(adj_.size());
    std::vector<EdgeIx> via(n, kNoEdge);
    std::vector<Vertex> prev(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<Vertex> q;
    q.push(a);
    seen[a] = 1;
    while (!q.empty() && !seen[b]) {
      Vertex x = q.front();
      q.pop();
      for (auto [y, e] : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          via[y] = e;
          prev[y] = x;
          q.push(y);
        }
    }
    if (!seen[b]) throw Error("path query on disconnected tree");
    std::vector<EdgeIx> path;
    for (Vertex x = b; x != a; x = prev[x]) path.push_back(via[x]);
    std::sort(path.begin(), path.end());
    return path;
  }

  // Replace tree edge `out` with non-tree edge `in`; the result must again span.
  void swap(EdgeIx out, EdgeIx in) {
    if (!contains(out)) throw Error("swap: '" + g_->edge(out).id + "' is not a tree edge");
    if (contains(in)) throw Error("swap: '" + g_->edge(in).id + "' is already a tree edge");
    in_tree_[out] = 0;
    unlink(out);
    in_tree_[in] = 1;
    link(in);
    if (!spans()) {
      in_tree_[in] = 0;
      unlink(in);
      in_tree_[out] = 1;
      link(out);
      throw Error("swap(" + g_->edge(out).id + ", " + g_->edge(in).id + ") breaks the tree");
    }
  }

  // Vertices on the same side as `side_of` once tree edge e is removed.
  std::vector<char> side_after_removing(EdgeIx e, Vertex side_of) const {
    std::vector<char> side(adj_.size(), 0);
    std::queue<Vertex> q;
    q.push(side_of);
    side[side_of] = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto [y, f] : adj_[x])
        if (f != e && !side[y]) {
          side[y] = 1;
          q.push(y);
        }
    }
    return side;
  }

 private:
  void link(EdgeIx e) {
    const auto& ed = g_->edge(e);
    adj_[ed.u].push_back({ed.v, e});
    adj_[ed.v].push_back({ed.u, e});
  }
  void unlink(EdgeIx e) {
    const auto& ed = g_->edge(e);
    auto drop = [&](Vertex x) {
      auto& lst = adj_[x];
      lst.erase(std::find_if(lst.begin(), lst.end(), [&](auto& p) { return p.second == e; }));
    };
    drop(ed.u);
    drop(ed.v);
  }
  bool spans() const {
    int n = static_cast<int>(adj_.size());
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::queue<Vertex> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop();
      for (auto [y, e] : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          ++cnt;
          q.push(y);
        }
    }
    return cnt == n;
  }

  const WeightedGraph* g_;
  std::vector<char> in_tree_;
  std::vector<std::vector<std::pair<Vertex, EdgeIx>>> adj_;
};

// ---------------------------------------------------------------------------
// Edge-list text format. First line "n m", then one line "u v weight id" per
// edge. The writer emits edges sorted by id so save(load(x)) is byte-stable.

inline WeightedGraph load_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw Error("line 1: missing header 'n m'");
  int n = 0, m = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> m) || n < 0 || m < 0)
      throw Error("line " + std::to_string(lineno) + ": bad header, expected 'n m'");
  }
  WeightedGraph g(n);
  for (int i = 0; i < m; ++i) {
    if (!next_line())
      throw Error("line " + std::to_string(lineno + 1) + ": expected " + std::to_string(m) +
                  " edges, got " + std::to_string(i));
    std::istringstream es(line);
    int u, v;
    std::string wtok, id;
    if (!(es >> u >> v >> wtok >> id))
      throw Error("line " + std::to_string(lineno) + ": expected 'u v weight id'");
    double w;
    const char* b = wtok.data();
    auto res = std::from_chars(b, b + wtok.size(), w);
    if (res.ec != std::errc{} || res.ptr != b + wtok.size())
      throw Error("line " + std::to_string(lineno) + ": bad weight '" + wtok + "'");
    try {
      g.add_edge(id, u, v, w);
    } catch (const Error& err) {
      throw Error("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return g;
}

inline std::string save_graph(const WeightedGraph& g) {
  std::vector<EdgeIx> order(g.edge_count());
  for (EdgeIx e = 0; e < g.edge_count(); ++e) order[e] = e;
  std::sort(order.begin(), order.end(),
            [&](EdgeIx a, EdgeIx b) { return g.edge(a).id < g.edge(b).id; });
  std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (EdgeIx e : order) {
    const auto& ed = g.edge(e);
    out += std::to_string(ed.u) + " " + std::to_string(ed.v) + " " +
           detail::format_double(ed.weight) + " " + ed.id + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

// Tree edges of the unique cycle closed by non-tree edge f. Sorted by index.
inline std::vector<EdgeIx> fundamental_cycle(const WeightedGraph& g, const SpanningTree& t,
                                             EdgeIx f) {
  if (f < 0 || f >= g.edge_count()) throw Error("fundamental_cycle: unknown edge");
  if (t.contains(f)) throw Error("fundamental_cycle: '" + g.edge(f).id + "' is a tree edge");
  const auto& ed = g.edge(f);
  return t.path_edges(ed.u, ed.v);
}

struct MstVerdict {
  bool ok = true;
  // on failure: a non-tree edge lighter than some tree edge on its cycle
  EdgeIx offending_nontree = kNoEdge;
  EdgeIx heavier_tree_edge = kNoEdge;
  std::string message;
};

// Strong cycle property check: every non-tree edge must be the heaviest edge
// on its fundamental cycle. Under distinct weights this certifies the unique
// MST.
inline MstVerdict verify_mst_properties(const WeightedGraph& g, const SpanningTree& t) {
  for (EdgeIx f = 0; f < g.edge_count(); ++f) {
    if (t.contains(f)) continue;
    for (EdgeIx e : fundamental_cycle(g, t, f)) {
      if (g.weight(e) > g.weight(f)) {
        MstVerdict v;
        v.ok = false;
        v.offending_nontree = f;
        v.heavier_tree_edge = e;
        v.message = "non-tree edge '" + g.edge(f).id + "' is lighter than tree edge '" +
                    g.edge(e).id + "' on its cycle";
        return v;
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Degree-3 transformation: every vertex of degree d > 3 becomes a chain of
// d-2 vertices. Chain edges get weights strictly below the global minimum, so
// the MST of the transformed graph always contains all of them, and
// contracting them recovers the MST of the original graph.

struct TernaryMapping {
  // original vertex -> its chain in the transformed graph (size 1 if unexpanded)
  std::vector<std::vector<Vertex>> forward;
  // transformed vertex -> original vertex
  std::vector<Vertex> original_of;
  // chain edges added by the transformation (indices into the transformed graph)
  std::vector<EdgeIx> internal_edges;

  bool is_internal(EdgeIx e) const {
    return std::binary_search(internal_edges.begin(), internal_edges.end(), e);
  }
};

inline std::pair<WeightedGraph, TernaryMapping> ternarize(const WeightedGraph& g) {
  int n = g.vertex_count();
  TernaryMapping map;
  map.forward.resize(n);

  int next = 0;
  for (Vertex v = 0; v < n; ++v) {
    int d = static_cast<int>(g.incident(v).size());
    int k = std::max(1, d - 2);
    for (int i = 0; i < k; ++i) {
      map.forward[v].push_back(next++);
      map.original_of.push_back(v);
    }
  }

  WeightedGraph out(next);

  double min_w = std::numeric_limits<double>::infinity();
  for (const auto& ed : g.edges()) min_w = std::min(min_w, ed.weight);

  // chain edges first so their ids cannot collide with anything original
  int chain_rank = 0;
  for (Vertex v = 0; v < n; ++v) {
    const auto& chain = map.forward[v];
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      std::string id;
      do {
        id = "_t" + std::to_string(chain_rank++);
      } while (g.find_edge(id) != kNoEdge || out.find_edge(id) != kNoEdge);
      EdgeIx e = out.add_edge(id, chain[i], chain[i + 1], min_w - 1.0 - (chain_rank - 1));
      map.internal_edges.push_back(e);
    }
  }

  // each original edge attaches to a chain slot with spare capacity:
  // chain ends host two external edges, middles host one
  std::vector<int> used(next, 0);
  auto slot_for = [&](Vertex orig) -> Vertex {
    const auto& chain = map.forward[orig];
    int k = static_cast<int>(chain.size());
    for (int i = 0; i < k; ++i) {
      int cap = (k == 1) ? 3 : (i == 0 || i == k - 1) ? 2 : 1;
      if (used[chain[i]] < cap) {
        ++used[chain[i]];
        return chain[i];
      }
    }
    throw Error("ternarize: chain capacity exhausted (internal error)");
  };

  for (const auto& ed : g.edges()) out.add_edge(ed.id, slot_for(ed.u), slot_for(ed.v), ed.weight);

  std::sort(map.internal_edges.begin(), map.internal_edges.end());
  return {std::move(out), std::move(map)};
}

}  // namespace dmst
