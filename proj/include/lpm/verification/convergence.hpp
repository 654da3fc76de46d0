#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lpm/scenarios/scenarios.hpp"
#include "lpm/solver/simulation.hpp"
#include "lpm/verification/muscl.hpp"
#include "lpm/verification/norms.hpp"

namespace lpm {

/// Solver settings shared by every resolution of a study.
struct RunSettings {
  SolverOptions solver{};
  double cfl = 0.9;
  /// Search radius in units of the scenario's initial spacing.
  double radius_factor = 3.0;
  /// Stencil rank threshold and one-sided offset ratio; empty selects the
  /// per-dimension default and overrides `solver.stencil`.
  std::optional<double> epsilon;
  std::optional<double> min_offset_ratio;
};

/// In 1D the threshold applies as given. In 2D and 3D the Taylor columns are
/// length-normalized, so quadratic columns are O(h) larger than with raw
/// offsets and 1e-3 admits ill-conditioned order-2 stencils; near-hyperplane
/// neighbours also mix transverse curvature into the one-sided estimates.
inline StencilOptions default_stencil_options(int dim) {
  StencilOptions s;
  if (dim > 1) {
    s.epsilon = 3e-2;
    s.min_offset_ratio = 0.4;
  }
  return s;
}

template <int Dim>
SolverOptions solver_options_for(const Scenario<Dim>& s, const RunSettings& settings) {
  SolverOptions opt = settings.solver;
  opt.search_radius = settings.radius_factor * s.spacing;
  const auto d = default_stencil_options(Dim);
  opt.stencil.epsilon = settings.epsilon.value_or(d.epsilon);
  opt.stencil.min_offset_ratio = settings.min_offset_ratio.value_or(d.min_offset_ratio);
  return opt;
}

/// Runs a scenario to time t and returns the final particles.
template <int Dim>
ParticleSet<Dim> run_to(const Scenario<Dim>& s, const RunSettings& settings, double t) {
  Simulation<Dim> sim(s.particles, s.eos, s.boundary, solver_options_for(s, settings), settings.cfl);
  sim.advance_to(t);
  return sim.particles();
}

/// Particles sorted by position as a 1D reference field.
inline ReferenceSolution1d reference_from_particles(const ParticleSet<1>& particles, const Boundary<1>& b) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < particles.size(); ++i)
    if (particles[i].phase == Phase::fluid) order.push_back(i);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t c) { return particles[a].position[0] < particles[c].position[0]; });
  ReferenceSolution1d r;
  r.periodic = b.kind == BoundaryKind::periodic;
  r.lo = b.lo[0];
  r.hi = b.hi[0];
  for (auto i : order) {
    r.x.push_back(particles[i].position[0]);
    r.V.push_back(particles[i].specific_volume);
    r.u.push_back(particles[i].velocity[0]);
    r.P.push_back(particles[i].pressure);
  }
  return r;
}

using ScenarioFactory1d = std::function<Scenario<1>(std::size_t)>;

enum class OracleKind { muscl, self_reference };

struct OracleOptions {
  OracleKind kind = OracleKind::muscl;
  /// Reference resolution relative to `base_count` (cells or particles).
  double multiplier = 8.0;
  /// Lower bound on the grid size of the Eulerian oracle.
  std::size_t min_cells = 2048;
  double muscl_cfl = 0.8;
  /// Solver settings of the self-reference run.
  RunSettings lp{};
};

inline GridBoundary grid_boundary_for(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::periodic: return GridBoundary::periodic;
    case BoundaryKind::wall: return GridBoundary::reflective;
    default: return GridBoundary::transmissive;
  }
}

/// Reference field at time t for a 1D scenario family: an Eulerian MUSCL grid
/// solution or the particle solver itself at higher resolution.
inline ReferenceSolution1d reference_oracle_1d(const ScenarioFactory1d& make, std::size_t base_count, double t,
                                               const OracleOptions& opt = {}) {
  const auto count = static_cast<std::size_t>(opt.multiplier * static_cast<double>(base_count));
  if (opt.kind == OracleKind::self_reference) {
    const auto s = make(count);
    return reference_from_particles(run_to<1>(s, opt.lp, t), s.boundary);
  }
  const auto s = make(base_count);
  if (!s.initial_state) throw DomainError("reference_oracle_1d: scenario has no initial field");
  const double lo = s.boundary.kind == BoundaryKind::none ? s.particles.front().position[0] : s.boundary.lo[0];
  const double hi = s.boundary.kind == BoundaryKind::none ? s.particles.back().position[0] : s.boundary.hi[0];
  MusclSolver grid(s.eos, lo, hi, std::max(count, opt.min_cells), grid_boundary_for(s.boundary.kind), opt.muscl_cfl);
  grid.initialize([&](double x) { return s.initial_state(Vec<1>{x}); });
  grid.advance_to(t);
  return grid.reference();
}

struct ConvergenceRow {
  std::size_t count = 0;
  double error = 0.0;
  /// Previous error divided by this one; empty for the first row.
  std::optional<double> ratio;
  /// Non-empty when the run aborted.
  std::string failure;
};

/// Runs every resolution to t_end and compares against `reference`. A failed
/// run ends the table with an annotated row.
inline std::vector<ConvergenceRow> convergence_study(const ScenarioFactory1d& make, const std::vector<std::size_t>& counts,
                                                     const RunSettings& settings, double t_end,
                                                     const ReferenceSolution1d& reference,
                                                     Field field = Field::pressure) {
  if (counts.size() < 3) throw DomainError("convergence_study: need at least three resolutions");
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i] != 2 * counts[i - 1]) throw DomainError("convergence_study: counts must double");
  std::vector<ConvergenceRow> rows;
  for (const auto n : counts) {
    ConvergenceRow row;
    row.count = n;
    try {
      const auto final_state = run_to<1>(make(n), settings, t_end);
      row.error = relative_l2_error(final_state, reference, field);
      if (!rows.empty()) row.ratio = rows.back().error / row.error;
    } catch (const std::exception& e) {
      row.failure = e.what();
      rows.push_back(row);
      break;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lpm
