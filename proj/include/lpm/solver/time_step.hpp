#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lpm/core/eos.hpp"
#include "lpm/neighbor/index.hpp"
#include "lpm/solver/options.hpp"

namespace lpm {

/// Distance from each of the first `count` points to its nearest other point
/// in the index. The query radius doubles until a neighbour is found; isolated
/// points get +inf.
template <int Dim>
std::vector<double> nearest_distances(std::span<const Vec<Dim>> points, std::size_t count,
                                      const NeighborIndex<Dim>& index, double radius) {
  std::vector<double> out(count, std::numeric_limits<double>::infinity());
  if (index.size() < 2) return out;
  std::vector<Neighbor> nbrs;
  for (std::size_t i = 0; i < count; ++i) {
    double r = radius;
    for (int attempt = 0; attempt < 24; ++attempt, r *= 2.0) {
      index.query_radius(points[i], r, i, nbrs);
      if (!nbrs.empty()) {
        out[i] = nbrs.front().distance;
        break;
      }
    }
  }
  return out;
}

/// Per-particle stable step limit; `speed_multiplier` scales the sound speed
/// (dimension multiplier of split steps). The limited scheme blends in the
/// first-order rates, so it takes the smaller of the two limits.
inline double step_limit(double l, double c, double speed, Scheme scheme, double speed_multiplier) {
  const double first = l / (speed_multiplier * c);
  const double second = 2.0 * l / std::max(speed_multiplier * c, speed);
  if (scheme == Scheme::first) return first;
  if (scheme == Scheme::beam_warming) return second;
  return std::min(first, second);
}

/// CFL step over fluid particles using precomputed nearest distances.
template <int Dim>
double compute_time_step(const ParticleSet<Dim>& particles, std::span<const double> nearest, const EosModel& eos,
                         double cfl, Scheme scheme, double speed_multiplier = 1.0) {
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles[i];
    if (p.phase != Phase::fluid) continue;
    const double c = sound_speed(eos, p.pressure, p.specific_volume);
    dt = std::min(dt, step_limit(nearest[i], c, norm<Dim>(p.velocity), scheme, speed_multiplier));
  }
  return cfl * dt;
}

/// CFL step with nearest distances measured among the particles themselves.
template <int Dim>
double compute_time_step(const ParticleSet<Dim>& particles, const EosModel& eos, double cfl, Scheme scheme,
                         double speed_multiplier = 1.0) {
  std::size_t fluid = 0;
  for (const auto& p : particles) fluid += p.phase == Phase::fluid;
  if (fluid < 2) throw DomainError("compute_time_step: need at least two fluid particles");
  const auto pts = positions_of(particles);
  Vec<Dim> lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (int d = 0; d < Dim; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  double extent = 0.0;
  for (int d = 0; d < Dim; ++d) extent = std::max(extent, hi[d] - lo[d]);
  const double cell = extent > 0.0 ? extent / std::pow(static_cast<double>(pts.size()), 1.0 / Dim) : 1.0;
  const auto index = NeighborIndex<Dim>::bucket(pts, cell);
  const auto nearest = nearest_distances<Dim>(pts, pts.size(), index, cell);
  return compute_time_step<Dim>(particles, nearest, eos, cfl, scheme, speed_multiplier);
}

}  // namespace lpm
