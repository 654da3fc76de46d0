#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "lpm/io/config.hpp"
#include "lpm/io/snapshot.hpp"
#include "lpm/scenarios/scenarios.hpp"
#include "lpm/solver/simulation.hpp"
#include "lpm/verification/convergence.hpp"

namespace lpm {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3 };

template <int Dim>
void apply_ghost_settings(Scenario<Dim>& s, const RunConfig& c) {
  s.boundary.ghosts.layers = c.ghost_layers;
  s.boundary.ghosts.dmin_factor = c.ghost_dmin_factor;
  s.boundary.ghosts.surface.count_fraction = c.surface_count_fraction;
  s.boundary.ghosts.surface.centroid_fraction = c.surface_centroid_fraction;
}

inline Scenario<1> make_scenario_1d(const RunConfig& c, std::size_t n) {
  Scenario<1> s;
  if (c.scenario == "gaussian_1d") s = init_gaussian_1d(n);
  else if (c.scenario == "gaussian_1d_stiffened") s = init_gaussian_1d_stiffened(n);
  else if (c.scenario == "sod_1d") s = init_sod_1d(n);
  else if (c.scenario == "uniform_1d") s = init_uniform_1d(n, 1.0, 0.0, 1.0, EosModel::polytropic(1.4));
  else throw ConfigError("scenario", "'" + c.scenario + "' is not one-dimensional");
  if (c.end_time) s.end_time = *c.end_time;
  apply_ghost_settings(s, c);
  return s;
}

inline Scenario<2> make_scenario_2d(const RunConfig& c, std::size_t n) {
  Scenario<2> s;
  if (c.scenario == "gaussian_disk_2d") {
    s = init_gaussian_disk_2d(n, {c.disk_radius, c.disk_reflections});
  } else if (c.scenario == "gresho") {
    GreshoParams g;
    g.frozen_band = c.gresho_frozen_band;
    s = init_gresho(n, g);
  } else if (c.scenario == "two_disks") {
    TwoDiskParams t;
    t.radius = c.disk_radius;
    t.impact = c.impact_parameter;
    t.speed = c.disk_speed;
    t.gap_spacings = c.gap_spacings;
    s = init_two_disks(n, t);
  } else {
    throw ConfigError("scenario", "'" + c.scenario + "' is not two-dimensional");
  }
  if (c.end_time) s.end_time = *c.end_time;
  apply_ghost_settings(s, c);
  return s;
}

inline RunSettings run_settings_from(const RunConfig& c) {
  RunSettings r;
  r.solver = solver_options_from(c);
  r.cfl = c.cfl;
  r.radius_factor = c.radius_factor;
  r.epsilon = c.epsilon;
  r.min_offset_ratio = c.min_offset_ratio;
  return r;
}

struct RunSummary {
  int exit_code = kExitOk;
  std::size_t steps = 0;
  double time = 0.0;
  double wall_seconds = 0.0;
  std::size_t snapshots = 0;
  std::string message;
};

namespace detail {

template <int Dim>
void emit_snapshot(const RunConfig& c, const std::filesystem::path& dir, std::size_t index,
                   const ParticleSet<Dim>& particles, double time) {
  char name[32];
  std::snprintf(name, sizeof name, "snapshot_%04zu", index);
  if (c.output_format != OutputFormat::vtk)
    write_text_file((dir / (std::string(name) + ".csv")).string(), snapshot_csv<Dim>(particles));
  if (c.output_format != OutputFormat::csv)
    write_text_file((dir / (std::string(name) + ".vtk")).string(), snapshot_vtk<Dim>(particles, time));
}

template <int Dim>
RunSummary run_scenario(const RunConfig& c, const Scenario<Dim>& s, const std::filesystem::path& dir) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary out;
  const auto settings = run_settings_from(c);
  const auto opt = solver_options_for(s, settings);
  Simulation<Dim> sim(s.particles, s.eos, s.boundary, opt, c.cfl, c.fixed_dt);
  std::string diag = diagnostics_header<Dim>();
  diag += diagnostics_row(compute_diagnostics<Dim>(sim.particles(), s.eos, 0.0, 0, 0.0, opt.search_radius));
  emit_snapshot<Dim>(c, dir, out.snapshots++, sim.particles(), 0.0);
  const double t_end = s.end_time;
  double next_output = c.output_interval ? *c.output_interval : t_end;
  auto reached = [](double t, double target) { return t >= target * (1.0 - 1e-12); };
  try {
    while (!reached(sim.time(), t_end)) {
      const double target = std::min(next_output, t_end);
      const double dt = sim.step(target - sim.time());
      diag += diagnostics_row(compute_diagnostics<Dim>(sim.particles(), s.eos, sim.time(), sim.steps(), dt,
                                                       opt.search_radius));
      if (reached(sim.time(), target)) {
        emit_snapshot<Dim>(c, dir, out.snapshots++, sim.particles(), sim.time());
        if (c.output_interval) next_output += *c.output_interval;
      }
    }
  } catch (const std::exception& e) {
    write_text_file((dir / "checkpoint.csv").string(), snapshot_csv<Dim>(sim.particles()));
    out.exit_code = kExitSolver;
    out.message = e.what();
  }
  write_text_file((dir / "diagnostics.csv").string(), diag);
  out.steps = sim.steps();
  out.time = sim.time();
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace detail

/// Runs a validated config, writing snapshots, diagnostics.csv and the
/// effective config into `out_dir`. Solver failures leave checkpoint.csv
/// (the last good state) and return exit code 3.
inline RunSummary run(const RunConfig& c, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_text_file((dir / "config.txt").string(), serialize_config(c));
  if (scenario_dimension(c.scenario) == 1) return detail::run_scenario<1>(c, make_scenario_1d(c, c.n), dir);
  return detail::run_scenario<2>(c, make_scenario_2d(c, c.n), dir);
}

/// Convergence table for a 1D scenario family at the config's end time.
inline std::vector<ConvergenceRow> run_convergence(const RunConfig& c, const std::vector<std::size_t>& counts,
                                                   Field field = Field::pressure) {
  if (scenario_dimension(c.scenario) != 1) throw ConfigError("scenario", "convergence studies need a 1D scenario");
  const ScenarioFactory1d make = [&](std::size_t n) { return make_scenario_1d(c, n); };
  const double t = make(counts.front()).end_time;
  OracleOptions oracle;
  oracle.kind = c.oracle == "muscl" ? OracleKind::muscl : OracleKind::self_reference;
  oracle.multiplier = c.oracle_multiplier;
  oracle.min_cells = c.oracle_min_cells;
  oracle.lp = run_settings_from(c);
  const auto reference = reference_oracle_1d(make, counts.back(), t, oracle);
  return convergence_study(make, counts, run_settings_from(c), t, reference, field);
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "count,error,ratio,failure\n";
  for (const auto& r : rows)
    out += std::to_string(r.count) + "," + format_g17(r.error) + "," + (r.ratio ? format_g17(*r.ratio) : "") + "," +
           r.failure + "\n";
  return out;
}

inline std::string convergence_text(const std::vector<ConvergenceRow>& rows) {
  std::string out = "   count   rel. L2 error   ratio\n";
  char buf[128];
  for (const auto& r : rows) {
    if (!r.failure.empty()) {
      std::snprintf(buf, sizeof buf, "%8zu   failed: %s\n", r.count, r.failure.c_str());
    } else if (r.ratio) {
      std::snprintf(buf, sizeof buf, "%8zu   %13.6e   %5.2f\n", r.count, r.error, *r.ratio);
    } else {
      std::snprintf(buf, sizeof buf, "%8zu   %13.6e      NA\n", r.count, r.error);
    }
    out += buf;
  }
  return out;
}

}  // namespace lpm
