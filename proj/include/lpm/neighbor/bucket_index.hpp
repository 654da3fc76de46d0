#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lpm/neighbor/neighbor.hpp"

namespace lpm {

/// Uniform grid of cubic cells whose side equals the search radius. Cells are
/// stored in CSR form (cell_start_ / ids_), built by a counting sort.
template <int Dim>
class BucketIndex {
 public:
  BucketIndex() = default;

  BucketIndex(std::span<const Vec<Dim>> points, double cell_size) : cell_(cell_size) {
    if (!(cell_size > 0.0)) throw DomainError("BucketIndex: cell size must be positive");
    points_.assign(points.begin(), points.end());
    if (points_.empty()) {
      dims_.fill(0);
      cell_start_.assign(1, 0);
      return;
    }
    Vec<Dim> lo = points_[0], hi = points_[0];
    for (const auto& p : points_) {
      if (!all_finite<Dim>(p)) throw DomainError("BucketIndex: non-finite position");
      for (int d = 0; d < Dim; ++d) {
        lo[d] = std::min(lo[d], p[d]);
        hi[d] = std::max(hi[d], p[d]);
      }
    }
    origin_ = lo;
    std::size_t total = 1;
    for (int d = 0; d < Dim; ++d) {
      dims_[d] = static_cast<long>(std::floor((hi[d] - lo[d]) / cell_)) + 1;
      total *= static_cast<std::size_t>(dims_[d]);
    }
    if (total > 64 * points_.size() + (1u << 20))
      throw DomainError("BucketIndex: domain too sparse for a uniform grid; use TreeIndex");

    std::vector<std::size_t> cell_of(points_.size());
    cell_start_.assign(total + 1, 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      cell_of[i] = linear(coords(points_[i]));
      ++cell_start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];
    ids_.resize(points_.size());
    std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
    for (std::size_t i = 0; i < points_.size(); ++i) ids_[fill[cell_of[i]]++] = i;
  }

  std::size_t size() const { return points_.size(); }
  std::size_t cell_count() const { return cell_start_.size() - 1; }
  double cell_size() const { return cell_; }
  std::span<const Vec<Dim>> points() const { return points_; }

  std::span<const std::size_t> cell_members(std::size_t cell) const {
    return {ids_.data() + cell_start_[cell], cell_start_[cell + 1] - cell_start_[cell]};
  }

  /// Particles with distance <= r from center, excluding `exclude`, sorted by
  /// (distance, id). Appends into `out` after clearing it.
  void query_radius(const Vec<Dim>& center, double r, std::size_t exclude, std::vector<Neighbor>& out) const {
    out.clear();
    if (points_.empty()) return;
    const long reach = static_cast<long>(std::ceil(r / cell_));
    std::array<long, Dim> lo{}, hi{};
    for (int d = 0; d < Dim; ++d) {
      const long c = static_cast<long>(std::floor((center[d] - origin_[d]) / cell_));
      lo[d] = std::max(0L, c - reach);
      hi[d] = std::min(dims_[d] - 1, c + reach);
      if (lo[d] > hi[d]) return;
    }
    std::array<long, Dim> it = lo;
    while (true) {
      const std::size_t cell = linear(it);
      for (std::size_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        const std::size_t id = ids_[k];
        if (id == exclude) continue;
        const double dist = distance<Dim>(points_[id], center);
        if (dist <= r) out.push_back({id, dist});
      }
      int d = 0;
      for (; d < Dim; ++d) {
        if (++it[d] <= hi[d]) break;
        it[d] = lo[d];
      }
      if (d == Dim) break;
    }
    sort_neighbors(out);
  }

  std::vector<Neighbor> query_radius(const Vec<Dim>& center, double r, std::size_t exclude = kNoId) const {
    std::vector<Neighbor> out;
    query_radius(center, r, exclude, out);
    return out;
  }

 private:
  std::array<long, Dim> coords(const Vec<Dim>& p) const {
    std::array<long, Dim> c{};
    for (int d = 0; d < Dim; ++d)
      c[d] = std::clamp(static_cast<long>(std::floor((p[d] - origin_[d]) / cell_)), 0L, dims_[d] - 1);
    return c;
  }

  std::size_t linear(const std::array<long, Dim>& c) const {
    std::size_t idx = 0;
    for (int d = Dim - 1; d >= 0; --d) idx = idx * static_cast<std::size_t>(dims_[d]) + static_cast<std::size_t>(c[d]);
    return idx;
  }

  std::vector<Vec<Dim>> points_;
  Vec<Dim> origin_{};
  std::array<long, Dim> dims_{};
  double cell_ = 1.0;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> ids_;
};

template <int Dim>
BucketIndex<Dim> build_bucket_index(const ParticleSet<Dim>& particles, double radius) {
  const auto pos = positions_of(particles);
  return BucketIndex<Dim>(pos, radius);
}

}  // namespace lpm
