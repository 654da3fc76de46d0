#pragma once

#include <span>
#include <variant>
#include <vector>

#include "lpm/neighbor/bucket_index.hpp"
#include "lpm/neighbor/tree_index.hpp"

namespace lpm {

/// Either spatial index behind one query interface.
template <int Dim>
class NeighborIndex {
 public:
  NeighborIndex() = default;
  explicit NeighborIndex(BucketIndex<Dim> b) : impl_(std::move(b)) {}
  explicit NeighborIndex(TreeIndex<Dim> t) : impl_(std::move(t)) {}

  static NeighborIndex bucket(std::span<const Vec<Dim>> points, double radius) {
    return NeighborIndex(BucketIndex<Dim>(points, radius));
  }
  static NeighborIndex tree(std::span<const Vec<Dim>> points, int depth, std::size_t leaf_capacity = 8) {
    return NeighborIndex(TreeIndex<Dim>(points, depth, leaf_capacity));
  }

  void query_radius(const Vec<Dim>& center, double r, std::size_t exclude, std::vector<Neighbor>& out) const {
    std::visit([&](const auto& idx) { idx.query_radius(center, r, exclude, out); }, impl_);
  }

  std::vector<Neighbor> query_radius(const Vec<Dim>& center, double r, std::size_t exclude = kNoId) const {
    std::vector<Neighbor> out;
    query_radius(center, r, exclude, out);
    return out;
  }

  std::size_t size() const {
    return std::visit([](const auto& idx) { return idx.size(); }, impl_);
  }

 private:
  std::variant<BucketIndex<Dim>, TreeIndex<Dim>> impl_;
};

}  // namespace lpm
