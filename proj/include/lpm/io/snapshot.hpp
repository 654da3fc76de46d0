#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpm/core/eos.hpp"
#include "lpm/neighbor/index.hpp"
#include "lpm/solver/time_step.hpp"

namespace lpm {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Global totals of a particle set. Sums run in particle order.
template <int Dim>
struct Diagnostics {
  double time = 0.0;
  std::size_t step = 0;
  double dt = 0.0;
  double total_mass = 0.0;
  Vec<Dim> momentum{};
  double kinetic_energy = 0.0;
  double internal_energy = 0.0;
  double min_spacing = 0.0;
};

template <int Dim>
Diagnostics<Dim> compute_diagnostics(const ParticleSet<Dim>& particles, const EosModel& eos, double time,
                                     std::size_t step, double dt, double search_radius) {
  Diagnostics<Dim> d;
  d.time = time;
  d.step = step;
  d.dt = dt;
  for (const auto& p : particles) {
    if (p.phase == Phase::ghost) continue;
    d.total_mass += p.mass;
    double u2 = 0.0;
    for (int a = 0; a < Dim; ++a) {
      d.momentum[a] += p.mass * p.velocity[a];
      u2 += p.velocity[a] * p.velocity[a];
    }
    d.kinetic_energy += 0.5 * p.mass * u2;
    d.internal_energy += p.mass * internal_energy(eos, p.pressure, p.specific_volume);
  }
  const auto pts = positions_of(particles);
  if (pts.size() >= 2 && search_radius > 0.0) {
    const auto index = NeighborIndex<Dim>::bucket(pts, search_radius);
    const auto nearest = nearest_distances<Dim>(pts, pts.size(), index, search_radius);
    d.min_spacing = *std::min_element(nearest.begin(), nearest.end());
  }
  return d;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// CSV snapshot: header then one row per non-ghost particle
/// (id, phase, position, velocity, V, P, mass); 17 significant digits.
template <int Dim>
std::string snapshot_csv(const ParticleSet<Dim>& particles) {
  static constexpr const char* kAxes[] = {"x", "y", "z"};
  static constexpr const char* kVel[] = {"u", "v", "w"};
  std::ostringstream o;
  o << "id,phase";
  for (int a = 0; a < Dim; ++a) o << ',' << kAxes[a];
  for (int a = 0; a < Dim; ++a) o << ',' << kVel[a];
  o << ",V,P,mass\n";
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto& p = particles[i];
    if (p.phase == Phase::ghost) continue;
    o << i << ',' << phase_name(p.phase);
    for (int a = 0; a < Dim; ++a) o << ',' << format_g17(p.position[a]);
    for (int a = 0; a < Dim; ++a) o << ',' << format_g17(p.velocity[a]);
    o << ',' << format_g17(p.specific_volume) << ',' << format_g17(p.pressure) << ',' << format_g17(p.mass) << '\n';
  }
  return o.str();
}

namespace detail {

// from_chars, unlike stod, accepts subnormals and never reads a prefix.
inline double parse_cell(const std::string& cell) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || end != cell.data() + cell.size()) throw IoError("snapshot: bad number '" + cell + "'");
  return v;
}

}  // namespace detail

/// Reads a CSV snapshot back (ids are taken as the row order).
template <int Dim>
ParticleSet<Dim> read_snapshot_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("snapshot: empty input");
  ParticleSet<Dim> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != static_cast<std::size_t>(2 * Dim + 5)) throw IoError("snapshot: wrong column count");
    Particle<Dim> p;
    p.phase = cells[1] == "fluid" ? Phase::fluid : cells[1] == "frozen" ? Phase::frozen : Phase::ghost;
    for (int a = 0; a < Dim; ++a) p.position[a] = detail::parse_cell(cells[static_cast<std::size_t>(2 + a)]);
    for (int a = 0; a < Dim; ++a) p.velocity[a] = detail::parse_cell(cells[static_cast<std::size_t>(2 + Dim + a)]);
    p.specific_volume = detail::parse_cell(cells[static_cast<std::size_t>(2 + 2 * Dim)]);
    p.pressure = detail::parse_cell(cells[static_cast<std::size_t>(3 + 2 * Dim)]);
    p.mass = detail::parse_cell(cells[static_cast<std::size_t>(4 + 2 * Dim)]);
    out.push_back(p);
  }
  return out;
}

/// Legacy ASCII VTK point cloud with scalars P, V and vector velocity.
template <int Dim>
std::string snapshot_vtk(const ParticleSet<Dim>& particles, double time) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < particles.size(); ++i)
    if (particles[i].phase != Phase::ghost) ids.push_back(i);
  const std::size_t n = ids.size();
  std::ostringstream o;
  o << "# vtk DataFile Version 3.0\n"
    << "particles t=" << format_g17(time) << "\n"
    << "ASCII\nDATASET POLYDATA\n"
    << "POINTS " << n << " double\n";
  auto vec3 = [&](const Vec<Dim>& v) {
    for (int a = 0; a < 3; ++a) o << (a ? " " : "") << format_g17(a < Dim ? v[a] : 0.0);
    o << '\n';
  };
  for (auto i : ids) vec3(particles[i].position);
  o << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t k = 0; k < n; ++k) o << "1 " << k << '\n';
  o << "POINT_DATA " << n << "\nSCALARS P double 1\nLOOKUP_TABLE default\n";
  for (auto i : ids) o << format_g17(particles[i].pressure) << '\n';
  o << "SCALARS V double 1\nLOOKUP_TABLE default\n";
  for (auto i : ids) o << format_g17(particles[i].specific_volume) << '\n';
  o << "VECTORS velocity double\n";
  for (auto i : ids) vec3(particles[i].velocity);
  return o.str();
}

template <int Dim>
std::string diagnostics_header() {
  std::string h = "time,step,dt,total_mass";
  static constexpr const char* kAxes[] = {"x", "y", "z"};
  for (int a = 0; a < Dim; ++a) h += std::string(",momentum_") + kAxes[a];
  return h + ",kinetic_energy,internal_energy,total_energy,min_spacing\n";
}

template <int Dim>
std::string diagnostics_row(const Diagnostics<Dim>& d) {
  std::ostringstream o;
  o << format_g17(d.time) << ',' << d.step << ',' << format_g17(d.dt) << ',' << format_g17(d.total_mass);
  for (int a = 0; a < Dim; ++a) o << ',' << format_g17(d.momentum[a]);
  o << ',' << format_g17(d.kinetic_energy) << ',' << format_g17(d.internal_energy) << ','
    << format_g17(d.kinetic_energy + d.internal_energy) << ',' << format_g17(d.min_spacing) << '\n';
  return o.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw IoError("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

}  // namespace lpm
