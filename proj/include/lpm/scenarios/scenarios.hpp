#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "lpm/core/eos.hpp"
#include "lpm/solver/boundary.hpp"
#include "lpm/verification/riemann.hpp"

namespace lpm {

/// Initial particles plus everything needed to run them.
template <int Dim>
struct Scenario {
  std::string name;
  EosModel eos{};
  ParticleSet<Dim> particles;
  Boundary<Dim> boundary{};
  /// Characteristic (largest) initial inter-particle spacing.
  double spacing = 0.0;
  double end_time = 0.0;
  /// Initial (rho, u_x, P) as a function of position, where one exists.
  std::function<PrimitiveState(const Vec<Dim>&)> initial_state;
};

/// Total mass and particle count fixed: every particle gets total/count.
template <int Dim>
void assign_equal_masses(ParticleSet<Dim>& particles, double total_mass) {
  const double m = total_mass / static_cast<double>(particles.size());
  for (auto& p : particles) p.mass = m;
}

inline double gaussian_pulse(double x) { return 5.0 + 2.0 * std::exp(-100.0 * x * x); }

namespace detail {
inline Scenario<1> periodic_gaussian_1d(std::size_t n, EosModel eos, double rho, std::string name) {
  if (n < 16) throw DomainError("gaussian_1d: n must be at least 16");
  Scenario<1> s;
  s.name = std::move(name);
  s.eos = eos;
  const double lo = -1.5, hi = 1.5;
  const double dx = (hi - lo) / static_cast<double>(n);
  s.particles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = s.particles[i];
    p.position[0] = lo + static_cast<double>(i) * dx;
    p.velocity[0] = 0.0;
    p.specific_volume = 1.0 / rho;
    p.pressure = gaussian_pulse(p.position[0]);
  }
  assign_equal_masses(s.particles, rho * (hi - lo));
  s.boundary.kind = BoundaryKind::periodic;
  s.boundary.lo = {lo};
  s.boundary.hi = {hi};
  s.spacing = dx;
  s.initial_state = [rho](const Vec<1>& x) { return PrimitiveState{rho, 0.0, gaussian_pulse(x[0])}; };
  return s;
}
}  // namespace detail

/// Polytropic Gaussian pressure wave on a periodic interval.
inline Scenario<1> init_gaussian_1d(std::size_t n) {
  auto s = detail::periodic_gaussian_1d(n, EosModel::polytropic(5.0 / 3.0), 0.01, "gaussian_1d");
  s.end_time = 0.04;
  return s;
}

/// Same pulse in a stiffened gas.
inline Scenario<1> init_gaussian_1d_stiffened(std::size_t n) {
  auto s = detail::periodic_gaussian_1d(n, EosModel::stiffened(6.0, 7000.0), 1.0, "gaussian_1d_stiffened");
  s.end_time = 0.01;
  return s;
}

/// Sod shock tube between reflecting walls at x = 0 and x = 1 with the
/// membrane at 0.5. Equal masses put the right particles 8x further apart.
inline Scenario<1> init_sod_1d(std::size_t n) {
  if (n < 100) throw DomainError("sod_1d: n must be at least 100");
  Scenario<1> s;
  s.name = "sod_1d";
  s.eos = EosModel::polytropic(1.4);
  const double total = 0.5 * 1.0 + 0.5 * 0.125;
  const double m = total / static_cast<double>(n);
  const double dl = m / 1.0, dr = m / 0.125;
  const auto n_left = static_cast<std::size_t>(std::llround(0.5 / dl));
  for (std::size_t i = 0; i < n_left; ++i) {
    Particle<1> p;
    p.position[0] = (static_cast<double>(i) + 0.5) * dl;
    p.specific_volume = 1.0;
    p.pressure = 1.0;
    s.particles.push_back(p);
  }
  for (std::size_t i = 0; s.particles.size() < n; ++i) {
    Particle<1> p;
    p.position[0] = 0.5 + (static_cast<double>(i) + 0.5) * dr;
    p.specific_volume = 8.0;
    p.pressure = 0.1;
    s.particles.push_back(p);
  }
  for (auto& p : s.particles) p.mass = m;
  s.boundary.kind = BoundaryKind::wall;
  s.boundary.lo = {0.0};
  s.boundary.hi = {1.0};
  s.spacing = dr;
  s.end_time = 0.2;
  s.initial_state = [](const Vec<1>& x) {
    return x[0] < 0.5 ? PrimitiveState{1.0, 0.0, 1.0} : PrimitiveState{0.125, 0.0, 0.1};
  };
  return s;
}

/// Hexagonal lattice points with spacing s and a point at `origin`, covering
/// the box [lo, hi]; `keep` filters them.
template <class Keep>
std::vector<Vec<2>> hex_lattice(double s, Vec<2> origin, Vec<2> lo, Vec<2> hi, Keep&& keep) {
  const double dy = s * std::sqrt(3.0) / 2.0;
  const auto j0 = static_cast<long>(std::floor((lo[1] - origin[1]) / dy)) - 1;
  const auto j1 = static_cast<long>(std::ceil((hi[1] - origin[1]) / dy)) + 1;
  std::vector<Vec<2>> out;
  for (long j = j0; j <= j1; ++j) {
    const double y = origin[1] + static_cast<double>(j) * dy;
    const double shift = (j % 2 != 0) ? 0.5 * s : 0.0;
    const auto i0 = static_cast<long>(std::floor((lo[0] - origin[0] - shift) / s)) - 1;
    const auto i1 = static_cast<long>(std::ceil((hi[0] - origin[0] - shift) / s)) + 1;
    for (long i = i0; i <= i1; ++i) {
      const Vec<2> p{origin[0] + shift + static_cast<double>(i) * s, y};
      if (keep(p)) out.push_back(p);
    }
  }
  return out;
}

/// Lattice spacing giving about n hexagonally packed points over `area`.
inline double hex_spacing_for(double area, std::size_t n) {
  return std::sqrt(2.0 * area / (std::sqrt(3.0) * static_cast<double>(n)));
}

inline ParticleSet<2> hex_disk(std::size_t n, double radius, Vec<2> center, double& spacing) {
  spacing = hex_spacing_for(std::numbers::pi * radius * radius, n);
  const auto pts = hex_lattice(spacing, center, {center[0] - radius, center[1] - radius},
                               {center[0] + radius, center[1] + radius}, [&](const Vec<2>& p) {
                                 return std::hypot(p[0] - center[0], p[1] - center[1]) <= radius * (1.0 + 1e-12);
                               });
  ParticleSet<2> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i].position = pts[i];
  return out;
}

struct DiskParams {
  double radius = 1.0;
  /// Reflections of the pulse off the free surface to cover by end_time.
  double reflections = 10.0;
};

/// Gaussian pulse P = 5 + 2 exp(-100 (1.5 r / R)^2) in a stiffened disk with
/// a free surface.
inline Scenario<2> init_gaussian_disk_2d(std::size_t n, const DiskParams& params = {}) {
  if (n < 100) throw DomainError("gaussian_disk_2d: n must be at least 100");
  Scenario<2> s;
  s.name = "gaussian_disk_2d";
  s.eos = EosModel::stiffened(6.0, 7000.0);
  const double R = params.radius;
  s.particles = hex_disk(n, R, {0.0, 0.0}, s.spacing);
  for (auto& p : s.particles) {
    p.specific_volume = 1.0;
    p.pressure = gaussian_pulse(1.5 * std::hypot(p.position[0], p.position[1]) / R);
  }
  assign_equal_masses(s.particles, std::numbers::pi * R * R);
  s.boundary.kind = BoundaryKind::free_surface;
  s.boundary.ghosts.spacing = s.spacing;
  const double c = sound_speed(s.eos, 5.0, 1.0);
  s.end_time = (2.0 * params.reflections) * R / c;
  return s;
}

/// Tangential speed and pressure of the steady vortex at radius r.
inline std::pair<double, double> gresho_exact(double r) {
  if (r <= 0.2) return {5.0 * r, 5.0 + 12.5 * r * r};
  if (r < 0.4) return {2.0 - 5.0 * r, 9.0 - 4.0 * std::log(0.2) + 12.5 * r * r - 20.0 * r + 4.0 * std::log(r)};
  return {0.0, 3.0 + 4.0 * std::log(2.0)};
}

struct GreshoParams {
  /// Thickness of the frozen far-field band in lattice spacings.
  double frozen_band = 3.0;
  double end_time = 0.2;
};

/// Steady vortex on [-0.5, 0.5]^2 with a frozen band along the rim.
inline Scenario<2> init_gresho(std::size_t n, const GreshoParams& params = {}) {
  if (n < 400) throw DomainError("gresho: n must be at least 400");
  Scenario<2> s;
  s.name = "gresho";
  s.eos = EosModel::polytropic(5.0 / 3.0);
  s.spacing = hex_spacing_for(1.0, n);
  const double h = 0.5 + 1e-12;
  const auto pts = hex_lattice(s.spacing, {0.0, 0.0}, {-0.5, -0.5}, {0.5, 0.5}, [&](const Vec<2>& p) {
    return std::abs(p[0]) <= h && std::abs(p[1]) <= h;
  });
  const double band = 0.5 - params.frozen_band * s.spacing;
  s.particles.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto& p = s.particles[i];
    p.position = pts[i];
    const double r = std::hypot(pts[i][0], pts[i][1]);
    const auto [u_phi, pr] = gresho_exact(r);
    p.velocity = r > 0.0 ? Vec<2>{-u_phi * pts[i][1] / r, u_phi * pts[i][0] / r} : Vec<2>{0.0, 0.0};
    p.pressure = pr;
    p.specific_volume = 1.0;
    if (std::abs(pts[i][0]) > band || std::abs(pts[i][1]) > band) p.phase = Phase::frozen;
  }
  assign_equal_masses(s.particles, 1.0);
  s.boundary.kind = BoundaryKind::none;
  s.end_time = params.end_time;
  return s;
}

struct TwoDiskParams {
  double radius = 1.0;
  /// Transverse offset of the centres (impact parameter).
  double impact = 1.0;
  double speed = 10.0;
  /// Longitudinal gap beyond first contact, in lattice spacings.
  double gap_spacings = 2.0;
  double end_time = 0.054;
};

/// Two equal stiffened disks at zero pressure approaching each other
/// off-centre. `n` is the particle count per disk.
inline Scenario<2> init_two_disks(std::size_t n, const TwoDiskParams& params = {}) {
  if (n < 200) throw DomainError("two_disks: n must be at least 200 per disk");
  Scenario<2> s;
  s.name = "two_disks";
  s.eos = EosModel::stiffened(6.0, 7000.0);
  const double R = params.radius;
  const double b = params.impact;
  double spacing = 0.0;
  const auto disk = hex_disk(n, R, {0.0, 0.0}, spacing);
  s.spacing = spacing;
  const double contact = std::sqrt(std::max(0.0, 4.0 * R * R - b * b));
  const double dx = 0.5 * (contact + params.gap_spacings * spacing);
  for (int k = 0; k < 2; ++k) {
    const double sign = k == 0 ? -1.0 : 1.0;
    for (auto p : disk) {
      p.position[0] += sign * dx;
      p.position[1] += sign * 0.5 * b;
      p.velocity = {-sign * params.speed, 0.0};
      p.specific_volume = 1.0;
      p.pressure = 0.0;
      s.particles.push_back(p);
    }
  }
  assign_equal_masses(s.particles, 2.0 * std::numbers::pi * R * R);
  s.boundary.kind = BoundaryKind::free_surface;
  s.boundary.ghosts.spacing = spacing;
  s.end_time = params.end_time;
  return s;
}

/// Uniform state on a periodic interval (tests and sanity runs).
inline Scenario<1> init_uniform_1d(std::size_t n, double V, double u, double P, const EosModel& eos) {
  Scenario<1> s;
  s.name = "uniform_1d";
  s.eos = eos;
  const double dx = 1.0 / static_cast<double>(n);
  s.particles.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = s.particles[i];
    p.position[0] = static_cast<double>(i) * dx;
    p.velocity[0] = u;
    p.specific_volume = V;
    p.pressure = P;
  }
  assign_equal_masses(s.particles, 1.0 / V);
  s.boundary.kind = BoundaryKind::periodic;
  s.boundary.lo = {0.0};
  s.boundary.hi = {1.0};
  s.spacing = dx;
  s.end_time = 0.1;
  s.initial_state = [V, u, P](const Vec<1>&) { return PrimitiveState{1.0 / V, u, P}; };
  return s;
}

}  // namespace lpm
