#pragma once

#include <span>
#include <vector>

#include "lpm/solver/axis_kernel.hpp"

namespace lpm {

struct SplitSubstep {
  int axis = 0;
  double fraction = 0.0;
};

/// Ordered per-axis substeps; each applies the 1D kernel with the flux matrix
/// scaled by `multiplier` over fraction * dt.
struct SplitPlan {
  std::vector<SplitSubstep> substeps;
  int multiplier = 1;
};

inline SplitPlan make_split_plan(int dimension) {
  if (dimension == 3) return {{{0, 1.0 / 6}, {1, 1.0 / 6}, {2, 2.0 / 6}, {1, 1.0 / 6}, {0, 1.0 / 6}}, 3};
  if (dimension == 2) return {{{0, 0.25}, {1, 0.5}, {0, 0.25}}, 2};
  throw DomainError("make_split_plan: dimension must be 2 or 3");
}

/// Plan for a given dimension including the trivial 1D case.
inline SplitPlan plan_for_dimension(int dimension) {
  if (dimension == 1) return {{{0, 1.0}}, 1};
  return make_split_plan(dimension);
}

/// One full step of length dt: substeps run sequentially, each rebuilding the
/// point cloud (and ghosts) for the current configuration.
template <int Dim>
ParticleSet<Dim> strang_step(const ParticleSet<Dim>& particles, const EosModel& eos, double dt,
                             const Boundary<Dim>& boundary, const SolverOptions& opt, const SplitPlan& plan,
                             std::span<const double> initial_volume = {}, AxisStats* stats = nullptr) {
  ParticleSet<Dim> current = particles;
  for (const auto& s : plan.substeps) {
    if (s.axis < 0 || s.axis >= Dim) throw DomainError("strang_step: plan axis out of range");
    current = axis_step<Dim>(current, boundary, s.axis, s.fraction * dt, static_cast<double>(plan.multiplier), eos,
                             opt, initial_volume, stats);
  }
  return current;
}

template <int Dim>
ParticleSet<Dim> strang_step(const ParticleSet<Dim>& particles, const EosModel& eos, double dt,
                             const Boundary<Dim>& boundary, const SolverOptions& opt) {
  return strang_step<Dim>(particles, eos, dt, boundary, opt, plan_for_dimension(Dim));
}

}  // namespace lpm
