#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lpm/solver/split.hpp"
#include "lpm/solver/time_step.hpp"

namespace lpm {

struct StepRecord {
  double dt = 0.0;
  bool retried = false;
  AxisStats stats{};
};

/// Time-stepping driver: CFL step selection, split/unsplit stepping and the
/// failure policy (one retry at half the step, then StepFailure).
template <int Dim>
class Simulation {
 public:
  Simulation(ParticleSet<Dim> particles, EosModel eos, Boundary<Dim> boundary, SolverOptions opt, double cfl,
             std::optional<double> fixed_dt = std::nullopt)
      : particles_(std::move(particles)),
        eos_(eos),
        boundary_(std::move(boundary)),
        opt_(opt),
        cfl_(cfl),
        fixed_dt_(fixed_dt),
        plan_(plan_for_dimension(Dim)) {
    if (!(cfl > 0.0)) throw DomainError("Simulation: cfl must be positive");
    initial_volume_.reserve(particles_.size());
    for (const auto& p : particles_) initial_volume_.push_back(p.specific_volume);
  }

  const ParticleSet<Dim>& particles() const { return particles_; }
  const EosModel& eos() const { return eos_; }
  const Boundary<Dim>& boundary() const { return boundary_; }
  const SolverOptions& options() const { return opt_; }
  double time() const { return time_; }
  std::size_t steps() const { return steps_; }
  const StepRecord& last_step() const { return last_; }

  /// CFL-limited step for the current configuration (or the fixed step).
  double stable_dt() const {
    if (fixed_dt_) return *fixed_dt_;
    const auto pts = positions_of(particles_);
    const auto index = make_index<Dim>(std::span<const Vec<Dim>>(pts), opt_.search_radius, opt_);
    const auto nearest = nearest_distances<Dim>(pts, pts.size(), index, opt_.search_radius);
    return compute_time_step<Dim>(particles_, nearest, eos_, cfl_, opt_.scheme, static_cast<double>(plan_.multiplier));
  }

  /// Advances by min(stable_dt, cap). Returns the step actually taken.
  double step(std::optional<double> cap = std::nullopt) {
    double dt = stable_dt();
    if (cap) dt = std::min(dt, *cap);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw StepFailure("non-positive or non-finite time step");
    last_ = StepRecord{};
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        AxisStats stats;
        auto next = strang_step<Dim>(particles_, eos_, dt, boundary_, opt_, plan_, initial_volume_, &stats);
        particles_ = std::move(next);
        time_ += dt;
        ++steps_;
        last_.dt = dt;
        last_.stats = stats;
        return dt;
      } catch (const StepFailure& e) {
        if (attempt == 1) throw StepFailure(std::string("step failed after retry at dt/2: ") + e.what());
      } catch (const HyperbolicityError& e) {
        if (attempt == 1) throw StepFailure(std::string("step failed after retry at dt/2: ") + e.what());
      }
      dt *= 0.5;
      last_.retried = true;
    }
    return 0.0;
  }

  /// Steps until `t_end` (last step shortened to land on it).
  void advance_to(double t_end) {
    while (time_ < t_end * (1.0 - 1e-14)) step(t_end - time_);
  }

 private:
  ParticleSet<Dim> particles_;
  EosModel eos_;
  Boundary<Dim> boundary_;
  SolverOptions opt_;
  double cfl_;
  std::optional<double> fixed_dt_;
  SplitPlan plan_;
  std::vector<double> initial_volume_;
  double time_ = 0.0;
  std::size_t steps_ = 0;
  StepRecord last_{};
};

}  // namespace lpm
