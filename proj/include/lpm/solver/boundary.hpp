#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "lpm/neighbor/index.hpp"
#include "lpm/solver/options.hpp"
#include "lpm/surface/ghosts.hpp"

namespace lpm {

enum class BoundaryKind { none, periodic, wall, free_surface };

inline const char* boundary_name(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::none: return "none";
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::wall: return "wall";
    case BoundaryKind::free_surface: return "free_surface";
  }
  return "?";
}

/// Periodic and wall boundaries act on every axis of the box [lo, hi).
template <int Dim>
struct Boundary {
  BoundaryKind kind = BoundaryKind::none;
  Vec<Dim> lo{};
  Vec<Dim> hi{};
  GhostOptions ghosts{};
};

/// Everything a stencil may see during one (sub)step: the particles
/// themselves (ids 0..owned-1, same order as the ParticleSet) followed by
/// periodic images, wall mirror images or free-surface ghosts.
template <int Dim>
struct PointCloud {
  std::vector<Vec<Dim>> positions;
  std::array<std::vector<double>, Dim> velocity;
  std::vector<double> pressure;
  std::size_t owned = 0;
  std::size_t ghosts = 0;
  NeighborIndex<Dim> index;

  std::size_t size() const { return positions.size(); }

  void push(const Vec<Dim>& x, const Vec<Dim>& u, double p) {
    positions.push_back(x);
    for (int d = 0; d < Dim; ++d) velocity[d].push_back(u[d]);
    pressure.push_back(p);
  }
};

namespace detail {
template <int Dim>
void add_periodic_images(PointCloud<Dim>& cloud, const ParticleSet<Dim>& particles, const Boundary<Dim>& b,
                         double radius) {
  for (const auto& p : particles) {
    std::array<std::array<double, 3>, Dim> shifts{};
    std::array<int, Dim> n{};
    for (int d = 0; d < Dim; ++d) {
      const double L = b.hi[d] - b.lo[d];
      shifts[d][n[d]++] = 0.0;
      if (p.position[d] < b.lo[d] + radius) shifts[d][n[d]++] = L;
      if (p.position[d] >= b.hi[d] - radius) shifts[d][n[d]++] = -L;
    }
    std::array<int, Dim> k{};
    while (true) {
      int d = 0;
      for (; d < Dim; ++d) {
        if (++k[d] < n[d]) break;
        k[d] = 0;
      }
      if (d == Dim) break;
      Vec<Dim> x = p.position;
      for (int a = 0; a < Dim; ++a) x[a] += shifts[a][k[a]];
      cloud.push(x, p.velocity, p.pressure);
    }
  }
}

template <int Dim>
void add_wall_images(PointCloud<Dim>& cloud, const ParticleSet<Dim>& particles, const Boundary<Dim>& b,
                     double radius) {
  for (int d = 0; d < Dim; ++d) {
    for (const auto& p : particles) {
      for (const double wall : {b.lo[d], b.hi[d]}) {
        if (std::abs(p.position[d] - wall) >= radius) continue;
        Vec<Dim> x = p.position;
        Vec<Dim> u = p.velocity;
        x[d] = 2.0 * wall - x[d];
        u[d] = -u[d];
        cloud.push(x, u, p.pressure);
      }
    }
  }
}
}  // namespace detail

template <int Dim>
NeighborIndex<Dim> make_index(std::span<const Vec<Dim>> points, double radius, const SolverOptions& opt) {
  if (opt.index == IndexKind::tree) return NeighborIndex<Dim>::tree(points, opt.tree_depth);
  return NeighborIndex<Dim>::bucket(points, radius);
}

/// Builds the stencil point cloud and its index for the current configuration.
/// Ghosts are regenerated from scratch on every call.
template <int Dim>
PointCloud<Dim> build_point_cloud(const ParticleSet<Dim>& particles, const Boundary<Dim>& b,
                                  const SolverOptions& opt) {
  const double radius = opt.search_radius;
  if (!(radius > 0.0)) throw DomainError("build_point_cloud: search radius must be positive");
  PointCloud<Dim> cloud;
  cloud.owned = particles.size();
  for (const auto& p : particles) cloud.push(p.position, p.velocity, p.pressure);
  switch (b.kind) {
    case BoundaryKind::none: break;
    case BoundaryKind::periodic: detail::add_periodic_images(cloud, particles, b, radius); break;
    case BoundaryKind::wall: detail::add_wall_images(cloud, particles, b, radius); break;
    case BoundaryKind::free_surface: {
      const auto own = make_index<Dim>(std::span<const Vec<Dim>>(cloud.positions), radius, opt);
      const auto surface = detect_surface_particles<Dim>(particles, own, radius, b.ghosts.surface);
      auto layer = place_ghosts<Dim>(surface, particles, own, radius, b.ghosts);
      assign_ghost_states<Dim>(layer, particles, own, radius);
      for (std::size_t g = 0; g < layer.size(); ++g) cloud.push(layer.positions[g], layer.velocities[g], 0.0);
      cloud.ghosts = layer.size();
      break;
    }
  }
  cloud.index = make_index<Dim>(std::span<const Vec<Dim>>(cloud.positions), radius, opt);
  return cloud;
}

/// Maps periodic positions back into [lo, hi).
template <int Dim>
void wrap_positions(ParticleSet<Dim>& particles, const Boundary<Dim>& b) {
  if (b.kind != BoundaryKind::periodic) return;
  for (auto& p : particles)
    for (int d = 0; d < Dim; ++d) {
      const double L = b.hi[d] - b.lo[d];
      while (p.position[d] < b.lo[d]) p.position[d] += L;
      while (p.position[d] >= b.hi[d]) p.position[d] -= L;
    }
}

}  // namespace lpm
