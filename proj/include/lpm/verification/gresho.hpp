#pragma once

#include <cmath>

#include "lpm/scenarios/scenarios.hpp"

namespace lpm {

struct GreshoDiagnostics {
  double time = 0.0;
  /// Mean |(|u| - u_phi(r))| over particles with r < 0.5.
  double l1_velocity_error = 0.0;
  double angular_momentum = 0.0;
  double kinetic_energy = 0.0;
};

inline GreshoDiagnostics gresho_diagnostics(const ParticleSet<2>& particles, double time) {
  GreshoDiagnostics d;
  d.time = time;
  std::size_t count = 0;
  for (const auto& p : particles) {
    if (p.phase == Phase::ghost) continue;
    const double x = p.position[0], y = p.position[1];
    const double u = p.velocity[0], v = p.velocity[1];
    d.angular_momentum += p.mass * (x * v - y * u);
    d.kinetic_energy += 0.5 * p.mass * (u * u + v * v);
    const double r = std::hypot(x, y);
    if (r < 0.5) {
      d.l1_velocity_error += std::abs(std::hypot(u, v) - gresho_exact(r).first);
      ++count;
    }
  }
  if (count > 0) d.l1_velocity_error /= static_cast<double>(count);
  return d;
}

}  // namespace lpm
