#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "phylosat/relation.hpp"

namespace phylosat {

/// Tree on vertices 0..n-1 with edges oriented away from `root`.
class Tree {
 public:
  Tree() = default;

  Tree(int vertices, std::vector<std::pair<int, int>> edges, int root)
      : n_(vertices), edges_(std::move(edges)), root_(root) {
    if (n_ < 2) throw Error(ErrorKind::InvalidTree, "a tree needs at least two vertices");
    if (static_cast<int>(edges_.size()) != n_ - 1) {
      throw Error(ErrorKind::InvalidTree, "edge count must be one less than the vertex count");
    }
    if (root_ < 0 || root_ >= n_) throw Error(ErrorKind::InvalidTree, "root is not a vertex");
    adj_.assign(static_cast<std::size_t>(n_), {});
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const auto [a, b] = edges_[static_cast<std::size_t>(e)];
      if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) {
        throw Error(ErrorKind::InvalidTree, "edge endpoints must be distinct vertices");
      }
      adj_[static_cast<std::size_t>(a)].push_back(e);
      adj_[static_cast<std::size_t>(b)].push_back(e);
    }
    // Orient away from the root; also detects disconnection (and so cycles).
    parent_edge_.assign(static_cast<std::size_t>(n_), -1);
    child_.assign(edges_.size(), -1);
    std::vector<int> stack{root_};
    std::vector<bool> seen(static_cast<std::size_t>(n_), false);
    seen[static_cast<std::size_t>(root_)] = true;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int e : adj_[static_cast<std::size_t>(v)]) {
        const int w = other_end(e, v);
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = true;
        ++reached;
        parent_edge_[static_cast<std::size_t>(w)] = e;
        child_[static_cast<std::size_t>(e)] = w;
        stack.push_back(w);
      }
    }
    if (reached != n_) throw Error(ErrorKind::InvalidTree, "graph is not connected");
  }

  int vertices() const noexcept { return n_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  int root() const noexcept { return root_; }
  const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
  int degree(int v) const { return static_cast<int>(adj_.at(static_cast<std::size_t>(v)).size()); }
  bool is_leaf(int v) const { return degree(v) == 1; }
  const std::vector<int>& incident(int v) const { return adj_.at(static_cast<std::size_t>(v)); }

  int other_end(int e, int v) const {
    const auto [a, b] = edges_.at(static_cast<std::size_t>(e));
    return a == v ? b : a;
  }
  /// Vertex the edge points to under the orientation away from the root.
  int head(int e) const { return child_.at(static_cast<std::size_t>(e)); }
  int tail(int e) const { return other_end(e, head(e)); }

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  int root_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_edge_;
  std::vector<int> child_;
};

/// Labels on edges. At every inner vertex the outgoing labels minus the
/// incoming label sum to zero.
struct TreeFlow {
  std::vector<std::uint8_t> labels;
  int modulus = 3;

  friend bool operator==(const TreeFlow&, const TreeFlow&) = default;
  friend auto operator<=>(const TreeFlow&, const TreeFlow&) = default;
};

struct TreeRelation {
  std::vector<TreeFlow> left;
  std::vector<TreeFlow> right;
};

/// The claw at v: leaf i of the claw is the i-th edge at v (ascending edge id).
struct StarView {
  int center = 0;
  std::vector<int> edges;
  int leaves() const { return static_cast<int>(edges.size()); }
};

inline StarView star(const Tree& t, int v) {
  if (v < 0 || v >= t.vertices()) throw Error(ErrorKind::InvalidTree, "no such vertex");
  if (t.is_leaf(v)) throw Error(ErrorKind::InvalidTree, "star of a leaf");
  StarView s{v, t.incident(v)};
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

inline bool is_valid(const Tree& t, const TreeFlow& f) {
  if (static_cast<int>(f.labels.size()) != t.edge_count() || f.modulus < 2) return false;
  for (auto l : f.labels)
    if (l >= f.modulus) return false;
  for (int v = 0; v < t.vertices(); ++v) {
    if (t.is_leaf(v)) continue;
    int sum = 0;
    for (int e : t.incident(v)) {
      const int l = f.labels[static_cast<std::size_t>(e)];
      sum += t.tail(e) == v ? l : f.modulus - l;
    }
    if (sum % f.modulus != 0) return false;
  }
  return true;
}

inline Flow restrict(const TreeFlow& f, const Tree& t, int v) {
  const StarView s = star(t, v);
  std::vector<std::uint8_t> out;
  for (int e : s.edges) {
    const int l = f.labels.at(static_cast<std::size_t>(e));
    out.push_back(static_cast<std::uint8_t>(t.tail(e) == v ? l : (f.modulus - l) % f.modulus));
  }
  return Flow::trusted(std::move(out), f.modulus);
}

namespace tree_detail {

/// Edges from v through `first` down to the smallest leaf of that branch.
inline std::vector<int> path_to_smallest_leaf(const Tree& t, int v, int first) {
  // Collect the branch and remember how each vertex was reached.
  std::vector<int> via(static_cast<std::size_t>(t.vertices()), -2);
  via[static_cast<std::size_t>(v)] = -1;
  const int start = t.other_end(first, v);
  via[static_cast<std::size_t>(start)] = first;
  std::vector<int> stack{start};
  int best = -1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (t.is_leaf(u) && (best < 0 || u < best)) best = u;
    for (int e : t.incident(u)) {
      const int w = t.other_end(e, u);
      if (via[static_cast<std::size_t>(w)] != -2) continue;
      via[static_cast<std::size_t>(w)] = e;
      stack.push_back(w);
    }
  }
  std::vector<int> path;
  for (int u = best; u != v;) {
    const int e = via[static_cast<std::size_t>(u)];
    path.push_back(e);
    u = t.other_end(e, u);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace tree_detail

/// Extends a flow on the claw at v to the whole tree: each claw label travels
/// from v to the smallest leaf of its branch, negated on edges pointing back.
inline TreeFlow extend(const Flow& f, const Tree& t, int v) {
  const StarView s = star(t, v);
  if (f.leaves() != s.leaves()) throw Error(ErrorKind::LeafCountMismatch, "flow does not fit the star");
  const int m = f.modulus();
  TreeFlow out{std::vector<std::uint8_t>(static_cast<std::size_t>(t.edge_count()), 0), m};
  for (int i = 0; i < s.leaves(); ++i) {
    const int l = f.residue(i);
    if (l == 0) continue;
    int at = v;
    for (int e : tree_detail::path_to_smallest_leaf(t, v, s.edges[static_cast<std::size_t>(i)])) {
      const bool along = t.tail(e) == at;
      out.labels[static_cast<std::size_t>(e)] = static_cast<std::uint8_t>(along ? l : (m - l) % m);
      at = t.other_end(e, at);
    }
  }
  return out;
}

inline TreeRelation extend_relation(const Relation& rel, const Tree& t, int v) {
  TreeRelation out;
  for (const auto& f : rel.left()) out.left.push_back(extend(f, t, v));
  for (const auto& f : rel.right()) out.right.push_back(extend(f, t, v));
  return out;
}

/// Equal cardinalities, valid flows, and equal per-edge counts of every label.
inline bool check_tree_relation(const Tree& t, const std::vector<TreeFlow>& left,
                                const std::vector<TreeFlow>& right) {
  if (left.size() != right.size()) return false;
  int m = 0;
  for (const auto* side : {&left, &right}) {
    for (const auto& f : *side) {
      if (m == 0) m = f.modulus;
      if (f.modulus != m || !is_valid(t, f)) return false;
    }
  }
  if (m == 0) return true;
  auto count = [&](const std::vector<TreeFlow>& side) {
    std::vector<int> c(static_cast<std::size_t>(t.edge_count() * m), 0);
    for (const auto& f : side)
      for (int e = 0; e < t.edge_count(); ++e) ++c[static_cast<std::size_t>(e * m + f.labels[static_cast<std::size_t>(e)])];
    return c;
  };
  return count(left) == count(right);
}

inline bool check_tree_relation(const Tree& t, const TreeRelation& rel) {
  return check_tree_relation(t, rel.left, rel.right);
}

}  // namespace phylosat
