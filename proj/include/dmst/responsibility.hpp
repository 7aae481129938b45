#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "dmst/bitset.hpp"
#include "dmst/graph.hpp"
#include "dmst/oracle.hpp"
#include "dmst/static_mst.hpp"

namespace dmst {

struct UpdateOutcome {
  enum Kind { Unchanged, Swapped } kind = Unchanged;
  EdgeIx out = kNoEdge;  // tree edge that left
  EdgeIx in = kNoEdge;   // non-tree edge that entered

  static UpdateOutcome unchanged() { return {}; }
  static UpdateOutcome swapped(EdgeIx out, EdgeIx in) { return {Swapped, out, in}; }
  bool operator==(const UpdateOutcome& o) const {
    return kind == o.kind && out == o.out && in == o.in;
  }
};

// Fully dynamic MST state built around a weight-ordered index of the non-tree
// edges. Every index node carries the cycle set C of its edge, the set N of
// tree edges it is responsible for (N being the lightest cover), and the
// aggregates L/R of what its left/right subtree is responsible for. A single
// weight change costs one index reorder plus, when the tree changes, one swap
// with a symmetric-difference sweep over the affected cycle sets.
class ResponsibilityIndex {
 public:
  ResponsibilityIndex(const WeightedGraph& g, const SpanningTree& t)
      : g_(g), t_(g_, t.edges()) {
    auto verdict = verify_mst_properties(g_, t_);
    if (!verdict.ok) throw Error("responsibility index needs the MST: " + verdict.message);
    f_tree_.assign(g_.edge_count(), kNoEdge);
    f_nontree_.assign(g_.edge_count(), kNoEdge);

    std::vector<EdgeIx> nontree;
    for (EdgeIx e = 0; e < g_.edge_count(); ++e)
      if (!t_.contains(e)) nontree.push_back(e);
    std::sort(nontree.begin(), nontree.end(),
              [&](EdgeIx a, EdgeIx b) { return g_.weight(a) < g_.weight(b); });

    // increasing-weight sweep: each edge picks up whatever its cycle covers
    // that is still unclaimed
    EdgeBitset claimed(g_.edge_count());
    for (EdgeIx j : nontree) {
      EdgeBitset cyc(g_.edge_count());
      for (EdgeIx e : fundamental_cycle(g_, t_, j)) cyc.set(e);
      EdgeBitset mine = cyc;
      mine.subtract(claimed);
      mine.for_each([&](int e) { f_tree_[e] = j; });
      claimed |= mine;
      attach(j, g_.weight(j), cyc, mine);
      refresh_max(j);
    }
  }

  ResponsibilityIndex(const ResponsibilityIndex&) = delete;
  ResponsibilityIndex& operator=(const ResponsibilityIndex&) = delete;

  const WeightedGraph& graph() const { return g_; }
  const SpanningTree& tree() const { return t_; }

  EdgeIx responsible_for(EdgeIx tree_edge) const { return f_tree_.at(tree_edge); }
  EdgeIx max_responsibility(EdgeIx nontree_edge) const { return f_nontree_.at(nontree_edge); }

  const EdgeBitset& cycle_set(EdgeIx nontree_edge) const { return node_at(nontree_edge)->C; }
  const EdgeBitset& resp_set(EdgeIx nontree_edge) const { return node_at(nontree_edge)->N; }
  const EdgeBitset& left_set(EdgeIx nontree_edge) const { return node_at(nontree_edge)->L; }
  const EdgeBitset& right_set(EdgeIx nontree_edge) const { return node_at(nontree_edge)->R; }

  // Weight-change entry point; dispatches on edge kind and delta sign.
  UpdateOutcome apply_update(EdgeIx e, double delta) {
    require_edge(e);
    if (delta == 0) return UpdateOutcome::unchanged();
    return set_weight_update(e, g_.weight(e) + delta);
  }

  // Same dispatch with an absolute target weight. Deletion parks an edge at
  // its sentinel exactly; insertion brings it back down.
  UpdateOutcome set_weight_update(EdgeIx e, double new_weight) {
    require_edge(e);
    double old = g_.weight(e);
    if (new_weight == old) return UpdateOutcome::unchanged();
    ensure_weight_free(e, new_weight);
    if (t_.contains(e)) {
      if (new_weight > old) return increase_tree(e, new_weight);
      // a cheaper tree edge stays in the tree; only the owner's max may move
      set_weight_checked(e, new_weight);
      if (f_tree_[e] != kNoEdge) refresh_max(f_tree_[e]);
      return UpdateOutcome::unchanged();
    }
    if (new_weight < old) return decrease_nontree(e, new_weight);
    // non-tree increase: reorder the index and let lighter edges take over
    Node* n = node_at(e);
    EdgeBitset cyc = n->C;
    reorder(e, new_weight);
    reassign_cover(cyc);
    return UpdateOutcome::unchanged();
  }

  // Non-tree edge drops to new_weight. The swap test runs against the
  // heaviest tree edge on the full cycle set C, not just on N: a lighter
  // non-tree edge may own part of the cycle, yet the entering edge still has
  // to evict the cycle maximum.
  UpdateOutcome decrease_nontree(EdgeIx e_j, double new_weight) {
    require_edge(e_j);
    if (t_.contains(e_j)) throw Error("decrease_nontree: '" + g_.edge(e_j).id + "' is a tree edge");
    ensure_weight_free(e_j, new_weight);
    Node* n = node_at(e_j);
    EdgeIx e_i = kNoEdge;
    n->C.for_each([&](int e) {
      if (e_i == kNoEdge || g_.weight(e) > g_.weight(e_i)) e_i = e;
    });
    if (e_i == kNoEdge || new_weight > g_.weight(e_i)) {
      EdgeBitset cyc = n->C;
      reorder(e_j, new_weight);
      reassign_cover(cyc);
      return UpdateOutcome::unchanged();
    }
    set_weight_checked(e_j, new_weight);
    node_at(e_j)->key = new_weight;
    t_.swap(e_i, e_j);
    update_after_swap(e_i, e_j);
    return UpdateOutcome::swapped(e_i, e_j);
  }

  // Tree edge rises to new_weight. The responsible node is located by the
  // L/N/R descent from the root; a swap happens when it undercuts the new
  // weight. Bridges have no responsible node and never swap.
  UpdateOutcome increase_tree(EdgeIx e_i, double new_weight) {
    require_edge(e_i);
    if (!t_.contains(e_i)) throw Error("increase_tree: '" + g_.edge(e_i).id + "' is not a tree edge");
    ensure_weight_free(e_i, new_weight);
    EdgeIx e_j = descend_responsible(e_i);
    if (e_j != f_tree_[e_i])
      throw Error("responsibility descent disagrees with the cover map (internal error)");
    if (e_j == kNoEdge) {  // bridge
      set_weight_checked(e_i, new_weight);
      return UpdateOutcome::unchanged();
    }
    if (g_.weight(e_j) < new_weight) {
      set_weight_checked(e_i, new_weight);
      t_.swap(e_i, e_j);
      update_after_swap(e_i, e_j);
      return UpdateOutcome::swapped(e_i, e_j);
    }
    set_weight_checked(e_i, new_weight);
    refresh_max(e_j);
    return UpdateOutcome::unchanged();
  }

  // Re-establishes all index invariants after tree edge `replaced` left the
  // tree and non-tree edge `entering` took its place. The tree swap itself
  // must already be done. With U = C(entering) + entering, every remaining
  // cycle set containing `replaced` moves by symmetric difference with U;
  // the evicted edge gets the cycle U - replaced, and the cover is rebuilt
  // over the tree edges U touches.
  void update_after_swap(EdgeIx replaced, EdgeIx entering) {
    if (t_.contains(replaced))
      throw Error("update_after_swap: '" + g_.edge(replaced).id + "' is still a tree edge");
    if (!t_.contains(entering))
      throw Error("update_after_swap: '" + g_.edge(entering).id + "' has not entered the tree");
    Node* nc = node_at(entering);
    EdgeBitset U = nc->C;
    U.set(entering);
    detach(entering);
    f_nontree_[entering] = kNoEdge;
    f_tree_[replaced] = kNoEdge;

    for (auto& [edge, node] : nodes_)
      if (node->C.test(replaced)) {
        node->C ^= U;
        if (!node->N.empty()) {
          node->N &= node->C;  // membership toggles can only drop N entries here
          pull_to_root(node.get());
          refresh_max(edge);
        }
      }

    EdgeBitset cyc_r = U;
    cyc_r.reset(replaced);
    attach(replaced, g_.weight(replaced), cyc_r, EdgeBitset(g_.edge_count()));

    EdgeBitset affected = cyc_r;  // == (C(entering) - replaced) + entering
    reassign_cover(affected);
  }

  // In-order (ascending current weight) listing of the indexed edges.
  std::vector<EdgeIx> inorder_edges() const {
    std::vector<EdgeIx> out;
    inorder(root_, out);
    return out;
  }

  struct NodeView {
    EdgeIx edge;
    EdgeIx left;   // kNoEdge when absent
    EdgeIx right;
  };

  // Pre-order shape of the index, for structural checks.
  std::vector<NodeView> structure() const {
    std::vector<NodeView> out;
    auto rec = [&](auto&& self, const Node* x) -> void {
      if (!x) return;
      out.push_back({x->edge, x->left ? x->left->edge : kNoEdge, x->right ? x->right->edge : kNoEdge});
      self(self, x->left);
      self(self, x->right);
    };
    rec(rec, root_);
    return out;
  }

  // Depth-first dump: one line per node with weight and the four sets as
  // id-sorted lists; children indented under their parent.
  std::string dump() const {
    std::string out;
    dump_rec(root_, 0, out);
    return out;
  }

 private:
  struct Node {
    EdgeIx edge;
    double key;
    EdgeBitset C, N, L, R;
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
    int height = 1;
  };

  void require_edge(EdgeIx e) const {
    if (e < 0 || e >= g_.edge_count()) throw Error("unknown edge index " + std::to_string(e));
  }

  // validate before touching any structure so a throw leaves the index intact
  void ensure_weight_free(EdgeIx e, double w) const {
    if (w == g_.weight(e)) return;
    if (g_.weight_in_use(w))
      throw Error("duplicate weight " + detail::format_double(w) + " requested for edge '" +
                  g_.edge(e).id + "'");
  }

  void set_weight_checked(EdgeIx e, double w) { g_.set_weight(e, w); }

  Node* node_at(EdgeIx e) const {
    auto it = nodes_.find(e);
    if (it == nodes_.end()) throw Error("edge '" + g_.edge(e).id + "' is not in the index");
    return it->second.get();
  }

  static int height(const Node* x) { return x ? x->height : 0; }

  static EdgeBitset aggregate(const Node* x, int universe) {
    if (!x) return EdgeBitset(universe);
    EdgeBitset a = x->N;
    a |= x->L;
    a |= x->R;
    return a;
  }

  void update(Node* x) {
    x->height = 1 + std::max(height(x->left), height(x->right));
    x->L = aggregate(x->left, g_.edge_count());
    x->R = aggregate(x->right, g_.edge_count());
  }

  void pull_to_root(Node* x) {
    for (; x; x = x->parent) update(x);
  }

  void replace_child(Node* parent, Node* was, Node* now) {
    if (!parent)
      root_ = now;
    else if (parent->left == was)
      parent->left = now;
    else
      parent->right = now;
    if (now) now->parent = parent;
  }

  Node* rotate_left(Node* x) {
    Node* y = x->right;
    replace_child(x->parent, x, y);
    x->right = y->left;
    if (y->left) y->left->parent = x;
    y->left = x;
    x->parent = y;
    update(x);
    update(y);
    return y;
  }

  Node* rotate_right(Node* x) {
    Node* y = x->left;
    replace_child(x->parent, x, y);
    x->left = y->right;
    if (y->right) y->right->parent = x;
    y->right = x;
    x->parent = y;
    update(x);
    update(y);
    return y;
  }

  Node* rebalance(Node* x) {
    int bf = height(x->left) - height(x->right);
    if (bf > 1) {
      if (height(x->left->left) < height(x->left->right)) rotate_left(x->left);
      return rotate_right(x);
    }
    if (bf < -1) {
      if (height(x->right->right) < height(x->right->left)) rotate_right(x->right);
      return rotate_left(x);
    }
    return x;
  }

  void fix_upward(Node* x) {
    while (x) {
      update(x);
      x = rebalance(x);
      x = x->parent;
    }
  }

  void attach(EdgeIx e, double key, EdgeBitset C, EdgeBitset N) {
    auto owned = std::make_unique<Node>();
    Node* n = owned.get();
    n->edge = e;
    n->key = key;
    n->C = std::move(C);
    n->N = std::move(N);
    n->L = EdgeBitset(g_.edge_count());
    n->R = EdgeBitset(g_.edge_count());
    nodes_.emplace(e, std::move(owned));

    Node* p = nullptr;
    Node* x = root_;
    while (x) {
      p = x;
      x = key < x->key ? x->left : x->right;
    }
    n->parent = p;
    if (!p)
      root_ = n;
    else if (key < p->key)
      p->left = n;
    else
      p->right = n;
    fix_upward(n);
  }

  void detach(EdgeIx e) {
    auto zit = nodes_.find(e);
    if (zit == nodes_.end()) throw Error("edge '" + g_.edge(e).id + "' is not in the index");
    Node* z = zit->second.release();
    nodes_.erase(zit);

    if (z->left && z->right) {
      // move the in-order successor's payload into z's slot, then remove the
      // successor node physically (it has at most one child)
      Node* s = z->right;
      while (s->left) s = s->left;
      auto sit = nodes_.find(s->edge);
      sit->second.release();
      nodes_.erase(sit);
      z->edge = s->edge;
      z->key = s->key;
      z->C = std::move(s->C);
      z->N = std::move(s->N);
      nodes_.emplace(z->edge, std::unique_ptr<Node>(z));
      z = s;
    }
    Node* child = z->left ? z->left : z->right;
    Node* start = z->parent;
    replace_child(z->parent, z, child);
    delete z;
    fix_upward(start ? start : root_);
  }

  void reorder(EdgeIx e, double new_weight) {
    Node* n = node_at(e);
    EdgeBitset C = n->C, N = n->N;
    detach(e);
    set_weight_checked(e, new_weight);
    attach(e, new_weight, std::move(C), std::move(N));
  }

  // For each tree edge in `edges`, re-derive the lightest covering non-tree
  // edge and move responsibility accordingly.
  void reassign_cover(const EdgeBitset& edges) {
    edges.for_each([&](int te) {
      if (!t_.contains(te)) return;
      EdgeIx owner = kNoEdge;
      double best = 0;
      for (auto& [je, node] : nodes_)
        if (node->C.test(te) && (owner == kNoEdge || node->key < best)) {
          owner = je;
          best = node->key;
        }
      EdgeIx old = f_tree_[te];
      if (old == owner) {
        if (owner != kNoEdge) refresh_max(owner);
        return;
      }
      if (old != kNoEdge && nodes_.count(old)) {
        Node* po = node_at(old);
        po->N.reset(te);
        pull_to_root(po);
        refresh_max(old);
      }
      f_tree_[te] = owner;
      if (owner != kNoEdge) {
        Node* pn = node_at(owner);
        pn->N.set(te);
        pull_to_root(pn);
        refresh_max(owner);
      }
    });
  }

  void refresh_max(EdgeIx j) {
    Node* n = node_at(j);
    EdgeIx best = kNoEdge;
    n->N.for_each([&](int e) {
      if (best == kNoEdge || g_.weight(e) > g_.weight(best)) best = e;
    });
    f_nontree_[j] = best;
  }

  // Locate the node responsible for tree edge e by set membership, the way a
  // search would run: N here, L left, R right.
  EdgeIx descend_responsible(EdgeIx e) const {
    const Node* x = root_;
    while (x) {
      if (x->N.test(e)) return x->edge;
      if (x->L.test(e))
        x = x->left;
      else if (x->R.test(e))
        x = x->right;
      else
        return kNoEdge;
    }
    return kNoEdge;
  }

  void inorder(const Node* x, std::vector<EdgeIx>& out) const {
    if (!x) return;
    inorder(x->left, out);
    out.push_back(x->edge);
    inorder(x->right, out);
  }

  std::string id_list(const EdgeBitset& s) const {
    std::vector<std::string> ids;
    s.for_each([&](int e) { ids.push_back(g_.edge(e).id); });
    std::sort(ids.begin(), ids.end());
    std::string out = "[";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) out += ",";
      out += ids[i];
    }
    return out + "]";
  }

  void dump_rec(const Node* x, int depth, std::string& out) const {
    if (!x) return;
    out.append(2 * depth, ' ');
    out += "node " + g_.edge(x->edge).id + " w=" + detail::format_double(x->key) +
           " C=" + id_list(x->C) + " N=" + id_list(x->N) + " L=" + id_list(x->L) +
           " R=" + id_list(x->R) + "\n";
    dump_rec(x->left, depth + 1, out);
    dump_rec(x->right, depth + 1, out);
  }

  WeightedGraph g_;
  SpanningTree t_;
  Node* root_ = nullptr;
  std::unordered_map<EdgeIx, std::unique_ptr<Node>> nodes_;
  std::vector<EdgeIx> f_tree_;     // tree edge -> responsible non-tree edge
  std::vector<EdgeIx> f_nontree_;  // non-tree edge -> heaviest edge in its N
};

}  // namespace dmst
