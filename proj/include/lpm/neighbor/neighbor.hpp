#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "lpm/core/types.hpp"

namespace lpm {

struct Neighbor {
  std::size_t id = kNoId;
  double distance = 0.0;
  bool operator==(const Neighbor&) const = default;
};

/// Ascending distance, ties by ascending id.
inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

inline void sort_neighbors(std::vector<Neighbor>& v) { std::sort(v.begin(), v.end(), neighbor_less); }

/// O(N^2) reference scan used to validate the spatial indexes.
template <int Dim>
std::vector<Neighbor> brute_force_radius(std::span<const Vec<Dim>> points, const Vec<Dim>& center, double r,
                                         std::size_t exclude = kNoId) {
  std::vector<Neighbor> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i == exclude) continue;
    const double d = distance<Dim>(points[i], center);
    if (d <= r) out.push_back({i, d});
  }
  sort_neighbors(out);
  return out;
}

}  // namespace lpm
