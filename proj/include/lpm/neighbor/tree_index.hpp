#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lpm/neighbor/neighbor.hpp"

namespace lpm {

/// 2^Dim-tree (binary tree, quadtree, octree). Particles live only in leaves;
/// a node splits while it holds more than `leaf_capacity` particles and is
/// shallower than `max_depth`. Children partition the parent box at its centre.
template <int Dim>
class TreeIndex {
 public:
  static constexpr int kChildren = 1 << Dim;

  struct Node {
    Vec<Dim> lo{}, hi{};
    std::array<int, kChildren> children{};
    std::size_t begin = 0, end = 0;  // range into ids_ (leaves only)
    int depth = 0;
    bool leaf = true;
  };

  TreeIndex() = default;

  TreeIndex(std::span<const Vec<Dim>> points, int max_depth, std::size_t leaf_capacity = 8)
      : max_depth_(max_depth), capacity_(leaf_capacity) {
    if (max_depth < 1) throw DomainError("TreeIndex: depth hint must be >= 1");
    if (leaf_capacity < 1) throw DomainError("TreeIndex: leaf capacity must be >= 1");
    points_.assign(points.begin(), points.end());
    ids_.resize(points_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) ids_[i] = i;
    Node root;
    if (!points_.empty()) {
      root.lo = root.hi = points_[0];
      for (const auto& p : points_) {
        if (!all_finite<Dim>(p)) throw DomainError("TreeIndex: non-finite position");
        for (int d = 0; d < Dim; ++d) {
          root.lo[d] = std::min(root.lo[d], p[d]);
          root.hi[d] = std::max(root.hi[d], p[d]);
        }
      }
      // Cubify so children stay cubic.
      double side = 0.0;
      for (int d = 0; d < Dim; ++d) side = std::max(side, root.hi[d] - root.lo[d]);
      if (side == 0.0) side = 1.0;
      for (int d = 0; d < Dim; ++d) root.hi[d] = root.lo[d] + side;
    }
    root.children.fill(-1);
    root.end = ids_.size();
    nodes_.push_back(root);
    split(0);
  }

  std::size_t size() const { return points_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  std::span<const std::size_t> leaf_members(const Node& n) const { return {ids_.data() + n.begin, n.end - n.begin}; }

  void query_radius(const Vec<Dim>& center, double r, std::size_t exclude, std::vector<Neighbor>& out) const {
    out.clear();
    if (points_.empty()) return;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      if (box_distance(n, center) > r) continue;
      if (n.leaf) {
        for (std::size_t k = n.begin; k < n.end; ++k) {
          const std::size_t id = ids_[k];
          if (id == exclude) continue;
          const double dist = distance<Dim>(points_[id], center);
          if (dist <= r) out.push_back({id, dist});
        }
      } else {
        for (int c : n.children)
          if (c >= 0) stack.push_back(c);
      }
    }
    sort_neighbors(out);
  }

  std::vector<Neighbor> query_radius(const Vec<Dim>& center, double r, std::size_t exclude = kNoId) const {
    std::vector<Neighbor> out;
    query_radius(center, r, exclude, out);
    return out;
  }

 private:
  static double box_distance(const Node& n, const Vec<Dim>& p) {
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) {
      const double e = p[d] < n.lo[d] ? n.lo[d] - p[d] : (p[d] > n.hi[d] ? p[d] - n.hi[d] : 0.0);
      s += e * e;
    }
    return std::sqrt(s);
  }

  void split(std::size_t node_index) {
    Node node = nodes_[node_index];
    if (node.end - node.begin <= capacity_ || node.depth >= max_depth_) return;
    Vec<Dim> mid{};
    for (int d = 0; d < Dim; ++d) mid[d] = 0.5 * (node.lo[d] + node.hi[d]);
    auto child_of = [&](std::size_t id) {
      int c = 0;
      for (int d = 0; d < Dim; ++d)
        if (points_[id][d] >= mid[d]) c |= 1 << d;
      return c;
    };
    // Stable partition of the range by child index (counting sort).
    std::array<std::size_t, kChildren + 1> start{};
    for (std::size_t k = node.begin; k < node.end; ++k) ++start[static_cast<std::size_t>(child_of(ids_[k])) + 1];
    for (int c = 0; c < kChildren; ++c) start[c + 1] += start[c];
    std::vector<std::size_t> tmp(node.end - node.begin);
    auto fill = start;
    for (std::size_t k = node.begin; k < node.end; ++k) tmp[fill[static_cast<std::size_t>(child_of(ids_[k]))]++] = ids_[k];
    std::copy(tmp.begin(), tmp.end(), ids_.begin() + static_cast<long>(node.begin));

    node.leaf = false;
    for (int c = 0; c < kChildren; ++c) {
      if (start[c] == start[c + 1]) {
        node.children[c] = -1;
        continue;
      }
      Node child;
      for (int d = 0; d < Dim; ++d) {
        const bool upper = (c >> d) & 1;
        child.lo[d] = upper ? mid[d] : node.lo[d];
        child.hi[d] = upper ? node.hi[d] : mid[d];
      }
      child.children.fill(-1);
      child.begin = node.begin + start[c];
      child.end = node.begin + start[c + 1];
      child.depth = node.depth + 1;
      node.children[c] = static_cast<int>(nodes_.size());
      nodes_.push_back(child);
    }
    nodes_[node_index] = node;
    for (int c = 0; c < kChildren; ++c)
      if (node.children[c] >= 0) split(static_cast<std::size_t>(node.children[c]));
  }

  std::vector<Vec<Dim>> points_;
  std::vector<std::size_t> ids_;
  std::vector<Node> nodes_;
  int max_depth_ = 5;
  std::size_t capacity_ = 8;
};

template <int Dim>
TreeIndex<Dim> build_tree_index(const ParticleSet<Dim>& particles, int depth_hint, std::size_t leaf_capacity = 8) {
  const auto pos = positions_of(particles);
  return TreeIndex<Dim>(pos, depth_hint, leaf_capacity);
}

}  // namespace lpm
