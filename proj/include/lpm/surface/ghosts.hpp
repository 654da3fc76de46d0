#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "lpm/core/types.hpp"
#include "lpm/neighbor/index.hpp"

namespace lpm {

struct SurfaceOptions {
  /// Flag when the neighbour count is below this fraction of the reference count.
  double count_fraction = 0.6;
  /// Flag when the neighbour centroid is offset by more than this fraction of the radius.
  double centroid_fraction = 0.25;
  /// Interior reference count; <= 0 uses the 90th percentile of fluid counts.
  double reference_count = 0.0;

  bool operator==(const SurfaceOptions&) const = default;
};

struct GhostOptions {
  int layers = 3;
  /// Target spacing of ghost layers (typically the initial inter-particle spacing).
  double spacing = 0.0;
  /// Candidates closer than dmin_factor * spacing to fluid or to another ghost are dropped.
  double dmin_factor = 0.7;
  SurfaceOptions surface{};

  bool operator==(const GhostOptions&) const = default;
};

/// Ghost particles in the vacuum region next to a free surface. Regenerated
/// from scratch whenever the fluid moves.
template <int Dim>
struct GhostLayer {
  std::vector<Vec<Dim>> positions;
  std::vector<Vec<Dim>> velocities;
  int layers = 0;
  double spacing = 0.0;
  double dmin = 0.0;

  std::size_t size() const { return positions.size(); }
};

namespace detail {
/// Neighbour centroid minus the particle position; empty-neighbourhood flag.
template <int Dim>
Vec<Dim> centroid_offset(const ParticleSet<Dim>& particles, std::size_t i, std::span<const Neighbor> nbrs,
                         std::size_t& count) {
  Vec<Dim> c{};
  count = 0;
  for (const auto& n : nbrs) {
    if (particles[n.id].phase == Phase::ghost) continue;
    for (int d = 0; d < Dim; ++d) c[d] += particles[n.id].position[d];
    ++count;
  }
  if (count == 0) return c;
  for (int d = 0; d < Dim; ++d) c[d] = c[d] / static_cast<double>(count) - particles[i].position[d];
  return c;
}
}  // namespace detail

/// Fluid particles near a free surface: sparse neighbourhood or a neighbour
/// centroid pulled away from the particle. `index` must cover `particles`.
template <int Dim>
std::vector<std::size_t> detect_surface_particles(const ParticleSet<Dim>& particles, const NeighborIndex<Dim>& index,
                                                  double radius, const SurfaceOptions& opt = {}) {
  std::vector<std::size_t> counts(particles.size(), 0);
  std::vector<Vec<Dim>> offsets(particles.size());
  std::vector<Neighbor> nbrs;
  std::vector<double> fluid_counts;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].phase != Phase::fluid) continue;
    index.query_radius(particles[i].position, radius, i, nbrs);
    offsets[i] = detail::centroid_offset<Dim>(particles, i, nbrs, counts[i]);
    fluid_counts.push_back(static_cast<double>(counts[i]));
  }
  double reference = opt.reference_count;
  if (reference <= 0.0 && !fluid_counts.empty()) {
    const auto k = static_cast<std::size_t>(0.9 * static_cast<double>(fluid_counts.size() - 1));
    std::nth_element(fluid_counts.begin(), fluid_counts.begin() + static_cast<long>(k), fluid_counts.end());
    reference = fluid_counts[k];
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].phase != Phase::fluid) continue;
    const bool sparse = counts[i] == 0 || static_cast<double>(counts[i]) < opt.count_fraction * reference;
    const bool lopsided = norm<Dim>(offsets[i]) > opt.centroid_fraction * radius;
    if (sparse || lopsided) out.push_back(i);
  }
  return out;
}

/// Places ghost candidates along outward normals of surface particles at
/// 1..layers times the spacing, then drops candidates within dmin of fluid or
/// of an already accepted ghost (inner layers accepted first).
template <int Dim>
GhostLayer<Dim> place_ghosts(std::span<const std::size_t> surface, const ParticleSet<Dim>& particles,
                             const NeighborIndex<Dim>& index, double radius, const GhostOptions& opt) {
  if (!(opt.spacing > 0.0)) throw DomainError("place_ghosts: spacing must be positive");
  GhostLayer<Dim> layer;
  layer.layers = opt.layers;
  layer.spacing = opt.spacing;
  layer.dmin = opt.dmin_factor * opt.spacing;

  std::vector<Vec<Dim>> normals;
  std::vector<std::size_t> sources;
  std::vector<Neighbor> nbrs;
  for (std::size_t s : surface) {
    index.query_radius(particles[s].position, radius, s, nbrs);
    std::size_t count = 0;
    const Vec<Dim> off = detail::centroid_offset<Dim>(particles, s, nbrs, count);
    const double len = norm<Dim>(off);
    if (count == 0 || !(len > 1e-12 * radius)) continue;
    Vec<Dim> n;
    for (int d = 0; d < Dim; ++d) n[d] = -off[d] / len;
    normals.push_back(n);
    sources.push_back(s);
  }

  std::vector<Vec<Dim>> candidates;
  for (int k = 1; k <= opt.layers; ++k) {
    for (std::size_t j = 0; j < sources.size(); ++j) {
      Vec<Dim> g;
      for (int d = 0; d < Dim; ++d) g[d] = particles[sources[j]].position[d] + k * opt.spacing * normals[j][d];
      index.query_radius(g, layer.dmin, kNoId, nbrs);
      const bool near_fluid = std::any_of(nbrs.begin(), nbrs.end(), [&](const Neighbor& nb) {
        return particles[nb.id].phase != Phase::ghost && nb.distance < layer.dmin;
      });
      if (!near_fluid) candidates.push_back(g);
    }
  }
  if (candidates.empty()) return layer;

  const BucketIndex<Dim> cand_index(candidates, layer.dmin);
  std::vector<char> accepted(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cand_index.query_radius(candidates[i], layer.dmin, i, nbrs);
    const bool clash = std::any_of(nbrs.begin(), nbrs.end(), [&](const Neighbor& nb) {
      return nb.id < i && accepted[nb.id] && nb.distance < layer.dmin;
    });
    if (!clash) {
      accepted[i] = 1;
      layer.positions.push_back(candidates[i]);
    }
  }
  layer.velocities.assign(layer.positions.size(), Vec<Dim>{});
  return layer;
}

/// Weighted zeroth-order fit of fluid velocities, u_0 = sum u_j w_j^2 / sum w_j^2
/// with w(d) = exp(-(d/spacing)^2) truncated at weight_radius. Ghosts without
/// any fluid neighbour are dropped. Ghost pressure is zero by construction.
template <int Dim>
void assign_ghost_states(GhostLayer<Dim>& layer, const ParticleSet<Dim>& particles, const NeighborIndex<Dim>& index,
                         double weight_radius) {
  std::vector<Vec<Dim>> kept_pos, kept_vel;
  std::vector<Neighbor> nbrs;
  const double s = layer.spacing > 0.0 ? layer.spacing : weight_radius;
  for (std::size_t g = 0; g < layer.positions.size(); ++g) {
    index.query_radius(layer.positions[g], weight_radius, kNoId, nbrs);
    Vec<Dim> num{};
    double den = 0.0;
    for (const auto& nb : nbrs) {
      if (particles[nb.id].phase == Phase::ghost) continue;
      const double w = std::exp(-(nb.distance / s) * (nb.distance / s));
      const double w2 = w * w;
      for (int d = 0; d < Dim; ++d) num[d] += w2 * particles[nb.id].velocity[d];
      den += w2;
    }
    if (!(den > 0.0)) continue;
    Vec<Dim> u;
    for (int d = 0; d < Dim; ++d) u[d] = num[d] / den;
    kept_pos.push_back(layer.positions[g]);
    kept_vel.push_back(u);
  }
  layer.positions = std::move(kept_pos);
  layer.velocities = std::move(kept_vel);
}

/// Ghost particles as particle records: P = 0, velocity assigned, V and mass
/// not applicable (V is NaN so that any accidental read is visible).
template <int Dim>
ParticleSet<Dim> ghost_particles(const GhostLayer<Dim>& layer) {
  ParticleSet<Dim> out(layer.size());
  for (std::size_t g = 0; g < layer.size(); ++g) {
    out[g].position = layer.positions[g];
    out[g].velocity = layer.velocities[g];
    out[g].pressure = 0.0;
    out[g].specific_volume = std::numeric_limits<double>::quiet_NaN();
    out[g].mass = 0.0;
    out[g].phase = Phase::ghost;
  }
  return out;
}

}  // namespace lpm
