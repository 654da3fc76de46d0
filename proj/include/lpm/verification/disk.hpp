#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lpm/core/types.hpp"
#include "lpm/gfd/qrcp.hpp"
#include "lpm/neighbor/index.hpp"

namespace lpm {

struct AsymmetryOptions {
  /// Sample rings at (k + 0.5) / rings * outer_fraction * R for k < rings.
  int rings = 12;
  int angles = 12;
  /// Rings stop short of the rim, where fits turn one-sided.
  double outer_fraction = 0.85;
  /// Interpolation radius in lattice spacings.
  double fit_radius = 2.5;
};

struct DiskDiagnostics {
  double min_pressure = 0.0;
  double max_pressure = 0.0;
  double mass = 0.0;
  /// max over rings of max|P(r, phi_1) - P(r, phi_2)|.
  double asymmetry = 0.0;
  bool finite = true;
};

/// Value of a local quadratic least-squares fit of `values` at `x`, or none
/// when fewer than 6 well-conditioned neighbours lie within `radius`.
inline std::optional<double> quadratic_interpolate(std::span<const Vec<2>> positions, std::span<const double> values,
                                                   const NeighborIndex<2>& index, const Vec<2>& x, double radius) {
  const auto nbrs = index.query_radius(x, radius);
  constexpr int n = 6;
  const int m = static_cast<int>(nbrs.size());
  if (m < n) return std::nullopt;
  std::vector<double> a(static_cast<std::size_t>(m) * n), b(static_cast<std::size_t>(m)), theta(n);
  for (int i = 0; i < m; ++i) {
    const auto& p = positions[nbrs[static_cast<std::size_t>(i)].id];
    const double h = (p[0] - x[0]) / radius, k = (p[1] - x[1]) / radius;
    const double row[n] = {1.0, h, k, 0.5 * h * h, 0.5 * k * k, h * k};
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j) * m + i] = row[j];
    b[static_cast<std::size_t>(i)] = values[nbrs[static_cast<std::size_t>(i)].id];
  }
  PivotedQR qr;
  qr.factorize(m, n, a);
  if (qr.effective_rank(1e-6) < n) return std::nullopt;
  qr.solve(b, n, theta);
  return theta[0];
}

/// Pressure range, mass and angular asymmetry of a disk about `center`.
/// `radius` is the nominal disk radius and `spacing` the lattice spacing.
inline DiskDiagnostics disk_diagnostics(const ParticleSet<2>& particles, const Vec<2>& center, double radius,
                                        double spacing, const AsymmetryOptions& opt = {}) {
  if (opt.rings < 1 || opt.angles < 2 || !(radius > 0.0) || !(spacing > 0.0))
    throw std::invalid_argument("disk_diagnostics: bad sampling parameters");
  DiskDiagnostics d;
  d.min_pressure = INFINITY;
  d.max_pressure = -INFINITY;
  std::vector<Vec<2>> pos;
  std::vector<double> pressure;
  for (const auto& p : particles) {
    if (p.phase == Phase::ghost) continue;
    d.mass += p.mass;
    if (!std::isfinite(p.pressure) || !std::isfinite(p.specific_volume) || !std::isfinite(p.position[0]) ||
        !std::isfinite(p.position[1]))
      d.finite = false;
    d.min_pressure = std::min(d.min_pressure, p.pressure);
    d.max_pressure = std::max(d.max_pressure, p.pressure);
    pos.push_back(p.position);
    pressure.push_back(p.pressure);
  }
  if (!d.finite || pos.empty()) return d;
  const double fit_r = opt.fit_radius * spacing;
  const auto index = NeighborIndex<2>::bucket(pos, fit_r);
  for (int k = 0; k < opt.rings; ++k) {
    const double r = (k + 0.5) / opt.rings * opt.outer_fraction * radius;
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < opt.angles; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / opt.angles;
      const Vec<2> x{center[0] + r * std::cos(phi), center[1] + r * std::sin(phi)};
      const auto v = quadratic_interpolate(pos, pressure, index, x, fit_r);
      if (!v) continue;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
    if (hi >= lo) d.asymmetry = std::max(d.asymmetry, hi - lo);
  }
  return d;
}

}  // namespace lpm
