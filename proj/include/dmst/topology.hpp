#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dmst/graph.hpp"
#include "dmst/responsibility.hpp"  // UpdateOutcome
#include "dmst/static_mst.hpp"

namespace dmst {

struct ConditionVerdict {
  bool ok = true;
  std::string message;
};

// The four restricted-partition conditions for clusters of a degree-<=3 tree:
//   1. external degree at most 3
//   2. external degree 3 forces cardinality 1
//   3. cardinality at most z
//   4. no two adjacent clusters could merge and still satisfy 1-3
// plus the structural basics (disjoint cover, connected inside the tree).
// Witnesses name the offending cluster(s) by their position in `clusters`.
inline ConditionVerdict check_conditions(const WeightedGraph& g, const SpanningTree& t,
                                         const std::vector<std::vector<Vertex>>& clusters, int z) {
  auto fail = [](std::string m) { return ConditionVerdict{false, std::move(m)}; };
  int n = g.vertex_count();
  std::vector<int> owner(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (clusters[c].empty()) return fail("cluster " + std::to_string(c) + " is empty");
    for (Vertex v : clusters[c]) {
      if (v < 0 || v >= n) return fail("cluster " + std::to_string(c) + " has unknown vertex");
      if (owner[v] != -1)
        return fail("vertex " + std::to_string(v) + " in clusters " + std::to_string(owner[v]) +
                    " and " + std::to_string(c));
      owner[v] = static_cast<int>(c);
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (owner[v] == -1) return fail("vertex " + std::to_string(v) + " is uncovered");

  std::vector<int> size(clusters.size()), deg(clusters.size(), 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) size[c] = static_cast<int>(clusters[c].size());

  std::set<std::pair<int, int>> adjacent;
  for (EdgeIx e = 0; e < g.edge_count(); ++e) {
    if (!t.contains(e)) continue;
    int cu = owner[g.edge(e).u], cv = owner[g.edge(e).v];
    if (cu == cv) continue;
    ++deg[cu];
    ++deg[cv];
    adjacent.insert({std::min(cu, cv), std::max(cu, cv)});
  }

  // connectivity inside the current tree
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::set<Vertex> inside(clusters[c].begin(), clusters[c].end());
    std::vector<Vertex> stack{clusters[c][0]};
    std::set<Vertex> seen{clusters[c][0]};
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (auto [y, e] : t.tree_incident(x))
        if (inside.count(y) && !seen.count(y)) {
          seen.insert(y);
          stack.push_back(y);
        }
    }
    if (seen.size() != inside.size())
      return fail("cluster " + std::to_string(c) + " is not connected in the tree");
  }

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (deg[c] > 3) return fail("cluster " + std::to_string(c) + " has external degree " +
                                std::to_string(deg[c]));
    if (deg[c] == 3 && size[c] != 1)
      return fail("cluster " + std::to_string(c) + " has external degree 3 but size " +
                  std::to_string(size[c]));
    if (size[c] > z)
      return fail("cluster " + std::to_string(c) + " exceeds order " + std::to_string(z));
  }
  for (auto [a, b] : adjacent) {
    bool mergeable = (deg[a] + deg[b] - 2 <= 2) && (size[a] + size[b] <= z);
    if (mergeable)
      return fail("clusters " + std::to_string(a) + " and " + std::to_string(b) +
                  " could merge (condition 4)");
  }
  return {};
}

// Clustering machinery for fully dynamic MST on a degree-<=3 graph: a
// restricted partition of order z at the base, order-2 partitions above it
// forming the topology tree, and per-cluster-pair minima of non-tree edges
// (the 2-dimensional topology tree) answering replacement queries. Pairs are
// materialized only where edges exist.
class TopologyHierarchy {
 public:
  TopologyHierarchy(const WeightedGraph& g, const SpanningTree& t, int z)
      : TopologyHierarchy(g, t, z, {}) {}

  // `given_base`, when nonempty, supplies the base clusters (they must form a
  // valid restricted partition of order z).
  TopologyHierarchy(const WeightedGraph& g, const SpanningTree& t, int z,
                    std::vector<std::vector<Vertex>> given_base)
      : g_(g), t_(g_, t.edges()), z_(z) {
    if (z_ < 1) throw Error("restricted partition needs z >= 1");
    for (Vertex v = 0; v < g_.vertex_count(); ++v)
      if (g_.incident(v).size() > 3)
        throw Error("vertex " + std::to_string(v) + " has degree > 3; ternarize first");

    cluster_of_.assign(g_.vertex_count(), -1);
    if (given_base.empty()) {
      for (Vertex v = 0; v < g_.vertex_count(); ++v) new_cluster({v});
      std::set<int> dirty;
      for (auto& c : clusters_)
        if (c.alive) dirty.insert(c.id);
      merge_pass(dirty);
    } else {
      auto verdict = check_conditions(g_, t_, given_base, z_);
      if (!verdict.ok) throw Error("supplied base partition invalid: " + verdict.message);
      for (auto& vs : given_base) new_cluster(std::vector<Vertex>(vs));
    }

    ekey_.assign(g_.edge_count(), {-1, -1});
    for (EdgeIx e = 0; e < g_.edge_count(); ++e)
      if (!t_.contains(e)) bucket_insert(e);
    rebuild_upper();
  }

  TopologyHierarchy(const TopologyHierarchy&) = delete;
  TopologyHierarchy& operator=(const TopologyHierarchy&) = delete;

  static int default_order(int edge_count) {
    return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(edge_count)))));
  }

  const WeightedGraph& graph() const { return g_; }
  const SpanningTree& tree() const { return t_; }
  int order() const { return z_; }

  std::vector<std::vector<Vertex>> base_clusters() const {
    std::vector<std::vector<Vertex>> out;
    for (const auto& c : clusters_)
      if (c.alive) out.push_back(c.vertices);
    return out;
  }

  ConditionVerdict check() const { return check_conditions(g_, t_, base_clusters(), z_); }

  // --- queries -------------------------------------------------------------

  // Minimum-weight non-tree edge reconnecting the two sides of the cut that
  // removing tree edge e opens; nullopt iff e is a bridge. Works at basic
  // cluster granularity: whole inside/outside pairs are answered from stored
  // pair minima, the straddling cluster (when e is internal to one) by
  // scanning its own edges.
  std::optional<EdgeIx> query_replacement(EdgeIx e) const {
    if (!t_.contains(e)) throw Error("query_replacement: '" + g_.edge(e).id + "' not a tree edge");
    const auto& ed = g_.edge(e);
    auto side = t_.side_after_removing(e, ed.u);
    int small_count = 0;
    for (char s : side) small_count += s;
    bool flip = small_count * 2 > g_.vertex_count() ||
                (small_count * 2 == g_.vertex_count() && !side[std::min(ed.u, ed.v)]);
    // `inside` holds the smaller side; ties go to the side with e's lower endpoint
    auto inside = [&](Vertex v) { return flip ? !side[v] : !!side[v]; };

    int straddler = cluster_of_[ed.u] == cluster_of_[ed.v] ? cluster_of_[ed.u] : -1;
    EdgeIx best = kNoEdge;
    auto consider = [&](EdgeIx f) {
      if (best == kNoEdge || g_.weight(f) < g_.weight(best)) best = f;
    };
    for (const auto& [key, set] : buckets_) {
      if (set.empty()) continue;
      auto [a, b] = key;
      if (a == straddler || b == straddler) {
        for (auto [w, f] : set)
          if (inside(g_.edge(f).u) != inside(g_.edge(f).v)) {
            consider(f);
            break;  // set is weight-ordered; first crossing edge is its minimum
          }
        continue;
      }
      bool ia = cluster_side(a, inside), ib = cluster_side(b, inside);
      if (ia != ib) consider(set.begin()->second);
    }
    if (best == kNoEdge) return std::nullopt;
    return best;
  }

  // --- updates -------------------------------------------------------------

  // Replace tree edge e_out by non-tree edge f_in and repair the hierarchy:
  // split the cluster that held e_out, split any cluster whose tree degree
  // grew past its cardinality class, then re-merge greedily until condition 4
  // holds again. Upper levels and pair minima are rebuilt afterwards.
  void apply_swap(EdgeIx e_out, EdgeIx f_in) {
    if (!t_.contains(e_out)) throw Error("apply_swap: '" + g_.edge(e_out).id + "' not a tree edge");
    if (t_.contains(f_in)) throw Error("apply_swap: '" + g_.edge(f_in).id + "' already a tree edge");
    {
      const auto& fd = g_.edge(f_in);
      auto side = t_.side_after_removing(e_out, g_.edge(e_out).u);
      if (side[fd.u] == side[fd.v])
        throw Error("apply_swap: cycle of '" + fd.id + "' does not contain '" + g_.edge(e_out).id +
                    "'");
    }
    touched_.clear();

    int cu = cluster_of_[g_.edge(e_out).u];
    int cv = cluster_of_[g_.edge(e_out).v];
    std::set<int> dirty;

    std::vector<std::vector<Vertex>> pieces;
    if (cu == cv) pieces = split_pieces(cu, e_out);

    t_.swap(e_out, f_in);

    if (cu == cv) {
      // the edge lived inside one cluster: it falls apart into the two pieces
      retire_cluster(cu);
      for (auto& p : pieces) dirty.insert(new_cluster(std::move(p)));
    } else {
      refresh_degree(cu);
      refresh_degree(cv);
      dirty.insert(cu);
      dirty.insert(cv);
    }

    // attach side: degree growth may force splits ("2 to 3" with size > 1)
    for (Vertex x : {g_.edge(f_in).u, g_.edge(f_in).v}) {
      int c = cluster_of_[x];
      refresh_degree(c);
      dirty.insert(c);
    }
    for (int c : std::set<int>(dirty)) {
      if (!clusters_[c].alive) {
        dirty.erase(c);
        continue;
      }
      auto products = fix_conditions(c);
      if (!products.empty()) {
        dirty.erase(c);
        dirty.insert(products.begin(), products.end());
      }
    }

    merge_pass(dirty);

    // bucket upkeep: the swapped pair changes sides, moved vertices re-home
    bucket_erase(f_in);
    bucket_insert(e_out);
    for (EdgeIx f = 0; f < g_.edge_count(); ++f) {
      if (t_.contains(f) || f == e_out) continue;
      auto key = edge_key(f);
      if (key != ekey_[f]) {
        bucket_erase(f);
        bucket_insert(f);
      }
    }
    rebuild_upper();
  }

  // Weight-change entry point covering all four cases.
  UpdateOutcome set_weight_update(EdgeIx e, double new_weight) {
    if (e < 0 || e >= g_.edge_count()) throw Error("unknown edge index");
    double old = g_.weight(e);
    if (new_weight == old) return UpdateOutcome::unchanged();
    if (t_.contains(e)) {
      if (new_weight < old) {  // tree decrease: never a change
        g_.set_weight(e, new_weight);
        return UpdateOutcome::unchanged();
      }
      auto rep = query_replacement(e);
      g_.set_weight(e, new_weight);
      if (rep && g_.weight(*rep) < new_weight) {
        apply_swap(e, *rep);
        return UpdateOutcome::swapped(e, *rep);
      }
      return UpdateOutcome::unchanged();
    }
    if (new_weight > old) {  // non-tree increase: reorder its bucket entry
      bucket_erase(e);
      g_.set_weight(e, new_weight);
      bucket_insert(e);
      rebuild_upper();
      return UpdateOutcome::unchanged();
    }
    // non-tree decrease: compare against the heaviest tree edge on its cycle
    EdgeIx mx = kNoEdge;
    for (EdgeIx te : fundamental_cycle(g_, t_, e))
      if (mx == kNoEdge || g_.weight(te) > g_.weight(mx)) mx = te;
    bucket_erase(e);
    g_.set_weight(e, new_weight);
    bucket_insert(e);
    if (mx != kNoEdge && new_weight < g_.weight(mx)) {
      apply_swap(mx, e);
      return UpdateOutcome::swapped(mx, e);
    }
    rebuild_upper();
    return UpdateOutcome::unchanged();
  }

  UpdateOutcome dynamic_mst_update(EdgeIx e, double delta) {
    if (e < 0 || e >= g_.edge_count()) throw Error("unknown edge index");
    if (delta == 0) return UpdateOutcome::unchanged();
    return set_weight_update(e, g_.weight(e) + delta);
  }

  // --- inspection ----------------------------------------------------------

  int last_swap_cluster_touches() const { return static_cast<int>(touched_.size()); }

  // vertex sets of every node, per level (level 0 = basic clusters)
  std::vector<std::vector<std::vector<Vertex>>> level_vertex_sets() const {
    std::vector<std::vector<std::vector<Vertex>>> out;
    out.push_back({});
    std::vector<int> alive;
    for (const auto& c : clusters_)
      if (c.alive) {
        out[0].push_back(c.vertices);
        alive.push_back(c.id);
      }
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      std::vector<std::vector<Vertex>> row;
      for (const auto& node : levels_[l]) {
        std::vector<Vertex> vs;
        for (int ch : node.children) {
          const auto& below = l == 0 ? out[0][ch] : out[l][ch];
          vs.insert(vs.end(), below.begin(), below.end());
        }
        std::sort(vs.begin(), vs.end());
        row.push_back(std::move(vs));
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  struct TopoNode {
    int level;  // 1-based above the basic clusters
    std::vector<int> children;
    int extdeg;
  };

  int upper_level_count() const { return static_cast<int>(levels_.size()); }
  const std::vector<TopoNode>& level_nodes(int l) const { return levels_.at(l); }

  struct PairMin {
    int level;  // 0 = basic-cluster pairs
    int a, b;   // node indices at that level (basic pairs use positions in base_clusters())
    EdgeIx edge;
  };

  // every materialized pair minimum, all levels
  std::vector<PairMin> two_dim_minima() const {
    std::vector<PairMin> out;
    std::map<int, int> pos;  // cluster id -> dense position
    {
      int p = 0;
      for (const auto& c : clusters_)
        if (c.alive) pos[c.id] = p++;
    }
    for (const auto& [key, set] : buckets_)
      if (!set.empty()) out.push_back({0, pos.at(key.first), pos.at(key.second), set.begin()->second});
    for (std::size_t l = 0; l < twodim_.size(); ++l)
      for (const auto& [key, e] : twodim_[l])
        out.push_back({static_cast<int>(l) + 1, key.first, key.second, e});
    return out;
  }

  // per-level cluster listing with vertices, degree and parent links
  std::string dump() const {
    std::string out;
    std::vector<int> alive;
    for (const auto& c : clusters_)
      if (c.alive) alive.push_back(c.id);
    out += "level 0 (" + std::to_string(alive.size()) + " basic clusters)\n";
    for (std::size_t i = 0; i < alive.size(); ++i) {
      const auto& c = clusters_[alive[i]];
      out += "  [" + std::to_string(i) + "] deg=" + std::to_string(c.extdeg) + " v={";
      for (std::size_t k = 0; k < c.vertices.size(); ++k)
        out += (k ? "," : "") + std::to_string(c.vertices[k]);
      out += "} parent=" + std::to_string(parent_at(0, static_cast<int>(i))) + "\n";
    }
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      out += "level " + std::to_string(l + 1) + " (" + std::to_string(levels_[l].size()) +
             " clusters)\n";
      for (std::size_t i = 0; i < levels_[l].size(); ++i) {
        const auto& nd = levels_[l][i];
        out += "  [" + std::to_string(i) + "] deg=" + std::to_string(nd.extdeg) + " children={";
        for (std::size_t k = 0; k < nd.children.size(); ++k)
          out += (k ? "," : "") + std::to_string(nd.children[k]);
        out += "} parent=" + std::to_string(parent_at(static_cast<int>(l) + 1, static_cast<int>(i))) +
               "\n";
      }
    }
    return out;
  }

 private:
  struct BaseCluster {
    int id;
    bool alive = true;
    std::vector<Vertex> vertices;  // sorted
    int extdeg = 0;
  };

  // --- base-cluster bookkeeping ---------------------------------------------

  int new_cluster(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    int id = static_cast<int>(clusters_.size());
    clusters_.push_back({id, true, std::move(vs), 0});
    for (Vertex v : clusters_[id].vertices) cluster_of_[v] = id;
    refresh_degree(id);
    touched_.insert(id);
    return id;
  }

  void retire_cluster(int id) {
    clusters_[id].alive = false;
    touched_.insert(id);
  }

  void refresh_degree(int id) {
    auto& c = clusters_[id];
    int d = 0;
    for (Vertex v : c.vertices)
      for (auto [y, e] : t_.tree_incident(v))
        if (cluster_of_[y] != id) ++d;
    c.extdeg = d;
    touched_.insert(id);
  }

  // connected components of the cluster's vertex set after dropping `cut`
  std::vector<std::vector<Vertex>> split_pieces(int id, EdgeIx cut) const {
    const auto& c = clusters_[id];
    std::set<Vertex> inside(c.vertices.begin(), c.vertices.end());
    std::set<Vertex> left;
    std::vector<std::vector<Vertex>> out;
    for (Vertex start : c.vertices) {
      if (left.count(start)) continue;
      std::vector<Vertex> piece{start};
      std::vector<Vertex> stack{start};
      left.insert(start);
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        for (auto [y, e] : t_.tree_incident(x)) {
          if (e == cut || !inside.count(y) || left.count(y)) continue;
          left.insert(y);
          piece.push_back(y);
          stack.push_back(y);
        }
      }
      out.push_back(std::move(piece));
    }
    return out;
  }

  // neighbors of a cluster in the shrunken tree
  std::vector<int> neighbor_clusters(int id) const {
    std::set<int> out;
    for (Vertex v : clusters_[id].vertices)
      for (auto [y, e] : t_.tree_incident(v))
        if (cluster_of_[y] != id) out.insert(cluster_of_[y]);
    return {out.begin(), out.end()};
  }

  bool merge_valid(int a, int b) const {
    const auto& ca = clusters_[a];
    const auto& cb = clusters_[b];
    return ca.extdeg + cb.extdeg - 2 <= 2 &&
           static_cast<int>(ca.vertices.size() + cb.vertices.size()) <= z_;
  }

  // greedy maximal merging over the dirty set; smallest ids go first
  void merge_pass(std::set<int> dirty) {
    while (!dirty.empty()) {
      int a = *dirty.begin();
      dirty.erase(dirty.begin());
      if (!clusters_[a].alive) continue;
      int partner = -1;
      for (int b : neighbor_clusters(a))
        if (merge_valid(a, b) && (partner == -1 || b < partner)) partner = b;
      if (partner == -1) continue;
      std::vector<Vertex> vs = clusters_[a].vertices;
      vs.insert(vs.end(), clusters_[partner].vertices.begin(), clusters_[partner].vertices.end());
      retire_cluster(a);
      retire_cluster(partner);
      dirty.erase(partner);
      // neighbours keep their degrees; only the merged cluster needs a fresh one
      dirty.insert(new_cluster(std::move(vs)));
    }
  }

  // split `id` until conditions 1 and 2 hold, preferring the balanced cut;
  // returns the ids of the resulting clusters (empty when nothing was done)
  std::vector<int> fix_conditions(int id) {
    auto& c = clusters_[id];
    bool bad = c.extdeg > 3 || (c.extdeg == 3 && c.vertices.size() > 1) ||
               static_cast<int>(c.vertices.size()) > z_;
    if (!bad) return {};
    if (c.vertices.size() == 1)
      throw Error("singleton cluster with external degree " + std::to_string(c.extdeg) +
                  " (degree-3 transform violated?)");

    // candidate cuts: intra-cluster tree edges
    struct Option {
      EdgeIx cut;
      int balance;
      Vertex low;
      bool feasible;
    };
    std::vector<Option> opts;
    std::set<Vertex> inside(c.vertices.begin(), c.vertices.end());
    for (Vertex v : c.vertices)
      for (auto [y, e] : t_.tree_incident(v)) {
        if (!inside.count(y) || g_.edge(e).u != v) continue;  // visit each intra edge once
        auto pieces = split_pieces(id, e);
        if (pieces.size() != 2) continue;
        int s0 = static_cast<int>(pieces[0].size()), s1 = static_cast<int>(pieces[1].size());
        auto piece_deg = [&](const std::vector<Vertex>& p) {
          std::set<Vertex> ps(p.begin(), p.end());
          int d = 0;
          for (Vertex x : p)
            for (auto [y2, e2] : t_.tree_incident(x))
              if (!ps.count(y2)) ++d;
          return d;
        };
        int d0 = piece_deg(pieces[0]), d1 = piece_deg(pieces[1]);
        if (d0 > 3 || d1 > 3) continue;
        bool feasible = (d0 < 3 || s0 == 1) && (d1 < 3 || s1 == 1);
        opts.push_back({e, std::abs(s0 - s1),
                        std::min(g_.edge(e).u, g_.edge(e).v), feasible});
      }
    if (opts.empty()) throw Error("cluster cannot be split (internal error)");
    std::sort(opts.begin(), opts.end(), [](const Option& x, const Option& y) {
      if (x.feasible != y.feasible) return x.feasible;
      if (x.balance != y.balance) return x.balance < y.balance;
      return x.low < y.low;
    });
    EdgeIx cut = opts.front().cut;
    auto pieces = split_pieces(id, cut);
    retire_cluster(id);
    std::vector<int> produced;
    for (auto& p : pieces) produced.push_back(new_cluster(std::move(p)));
    std::vector<int> out;
    for (int pid : produced) {
      auto rec = fix_conditions(pid);
      if (rec.empty())
        out.push_back(pid);
      else
        out.insert(out.end(), rec.begin(), rec.end());
    }
    return out;
  }

  // --- buckets and the 2-d structure ----------------------------------------

  std::pair<int, int> edge_key(EdgeIx f) const {
    int a = cluster_of_[g_.edge(f).u], b = cluster_of_[g_.edge(f).v];
    return {std::min(a, b), std::max(a, b)};
  }

  void bucket_insert(EdgeIx f) {
    auto key = edge_key(f);
    buckets_[key].insert({g_.weight(f), f});
    ekey_[f] = key;
  }

  void bucket_erase(EdgeIx f) {
    auto key = ekey_[f];
    if (key.first < 0) return;
    auto it = buckets_.find(key);
    if (it != buckets_.end()) {
      it->second.erase({g_.weight(f), f});
      if (it->second.empty()) buckets_.erase(it);
    }
    ekey_[f] = {-1, -1};
  }

  template <typename Pred>
  bool cluster_side(int id, Pred inside) const {
    return inside(clusters_[id].vertices.front());
  }

  int parent_at(int level, int index) const {
    if (level >= static_cast<int>(levels_.size())) return -1;
    const auto& row = levels_[level];
    for (std::size_t i = 0; i < row.size(); ++i)
      for (int ch : row[i].children)
        if (ch == index) return static_cast<int>(i);
    return -1;
  }

  // Rebuild the order-2 levels above the basic clusters and the upper pair
  // minima. A node at level l is one or two adjacent level-(l-1) clusters:
  // two only when one has external degree 1 or both have degree 2.
  void rebuild_upper() {
    levels_.clear();
    twodim_.clear();

    std::vector<int> alive;
    for (const auto& c : clusters_)
      if (c.alive) alive.push_back(c.id);
    int count = static_cast<int>(alive.size());
    if (count == 0) return;

    // dense position of each alive basic cluster
    std::map<int, int> pos;
    for (int i = 0; i < count; ++i) pos[alive[i]] = i;

    // membership of every vertex at the current level, plus per-node degree
    std::vector<int> member(g_.vertex_count());
    for (Vertex v = 0; v < g_.vertex_count(); ++v) member[v] = pos.at(cluster_of_[v]);
    std::vector<int> deg(count);
    for (int i = 0; i < count; ++i) deg[i] = clusters_[alive[i]].extdeg;

    comp_.assign(1, member);  // comp_[0] = basic level membership by vertex

    while (count > 1) {
      // adjacency of the shrunken tree at this level
      std::vector<std::set<int>> adj(count);
      for (EdgeIx e = 0; e < g_.edge_count(); ++e) {
        if (!t_.contains(e)) continue;
        int a = member[g_.edge(e).u], b = member[g_.edge(e).v];
        if (a != b) {
          adj[a].insert(b);
          adj[b].insert(a);
        }
      }
      std::vector<int> match(count, -1);
      for (int i = 0; i < count; ++i) {
        if (match[i] != -1) continue;
        for (int j : adj[i]) {
          if (match[j] != -1 || j == i) continue;
          if (deg[i] == 1 || deg[j] == 1 || (deg[i] == 2 && deg[j] == 2)) {
            match[i] = j;
            match[j] = i;
            break;
          }
        }
      }
      std::vector<TopoNode> row;
      std::vector<int> up(count, -1);
      for (int i = 0; i < count; ++i) {
        if (up[i] != -1) continue;
        TopoNode node;
        node.level = static_cast<int>(levels_.size()) + 1;
        node.children.push_back(i);
        up[i] = static_cast<int>(row.size());
        if (match[i] != -1) {
          node.children.push_back(match[i]);
          up[match[i]] = up[i];
          node.extdeg = deg[i] + deg[match[i]] - 2;
        } else {
          node.extdeg = deg[i];
        }
        row.push_back(std::move(node));
      }
      if (static_cast<int>(row.size()) == count)
        throw Error("topology levels stopped shrinking (internal error)");
      for (Vertex v = 0; v < g_.vertex_count(); ++v) member[v] = up[member[v]];
      deg.assign(row.size(), 0);
      for (std::size_t i = 0; i < row.size(); ++i) deg[i] = row[i].extdeg;
      count = static_cast<int>(row.size());
      levels_.push_back(std::move(row));
      comp_.push_back(member);
    }

    // pair minima: push every nonempty basic pair up through the levels
    twodim_.assign(levels_.size(), {});
    for (const auto& [key, set] : buckets_) {
      if (set.empty()) continue;
      auto [w, f] = *set.begin();
      for (std::size_t l = 0; l < levels_.size(); ++l) {
        const auto& ed = g_.edge(f);
        int a = comp_[l + 1][ed.u], b = comp_[l + 1][ed.v];
        auto k = std::make_pair(std::min(a, b), std::max(a, b));
        auto [it, fresh] = twodim_[l].emplace(k, f);
        if (!fresh && g_.weight(f) < g_.weight(it->second)) it->second = f;
      }
    }
  }

  WeightedGraph g_;
  SpanningTree t_;
  int z_;

  std::vector<BaseCluster> clusters_;  // append-only slots; alive flags
  std::vector<int> cluster_of_;        // vertex -> alive cluster id
  std::map<std::pair<int, int>, std::set<std::pair<double, EdgeIx>>> buckets_;
  std::vector<std::pair<int, int>> ekey_;  // non-tree edge -> bucket key

  std::vector<std::vector<TopoNode>> levels_;              // order-2 levels above base
  std::vector<std::vector<int>> comp_;                     // per level: vertex -> node index
  std::vector<std::map<std::pair<int, int>, EdgeIx>> twodim_;  // per upper level pair minima
  std::set<int> touched_;  // basic clusters touched by the last swap
};

// Convenience: the restricted partition of order z on its own.
inline std::vector<std::vector<Vertex>> build_partition(const WeightedGraph& g,
                                                        const SpanningTree& t, int z) {
  TopologyHierarchy h(g, t, z);
  return h.base_clusters();
}

}  // namespace dmst
