#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "lpm/core/eos.hpp"
#include "lpm/solver/boundary.hpp"
#include "lpm/solver/options.hpp"
#include "lpm/solver/parallel.hpp"
#include "lpm/solver/rates.hpp"

namespace lpm {

struct AxisStats {
  std::size_t updated = 0;
  /// Particles whose order-2 fit failed on some side and fell back to order 1.
  std::size_t order_fallbacks = 0;
  double phi_sum = 0.0;

  AxisStats& operator+=(const AxisStats& o) {
    updated += o.updated;
    order_fallbacks += o.order_fallbacks;
    phi_sum += o.phi_sum;
    return *this;
  }
};

/// Rates along `axis` for every fluid particle, read from the step-start
/// snapshot in `cloud`. Non-fluid particles get zero rates. `v0_scale` is the
/// flux-matrix multiplier (dimension multiplier of split steps), `tau` the
/// substep length used by the Beam-Warming correction.
template <int Dim>
std::vector<StateRates> compute_axis_rates(const ParticleSet<Dim>& particles, const PointCloud<Dim>& cloud, int axis,
                                           double tau, double v0_scale, const EosModel& eos,
                                           const SolverOptions& opt, std::span<const double> initial_volume = {},
                                           AxisStats* stats = nullptr) {
  const std::size_t n = particles.size();
  std::vector<StateRates> rates(n);
  const std::span<const Vec<Dim>> pos(cloud.positions);
  const std::span<const double> uvals(cloud.velocity[axis]);
  const std::span<const double> pvals(cloud.pressure);
  const int threads = std::max(1, opt.threads);
  std::vector<AxisStats> chunk_stats(static_cast<std::size_t>(threads));
  const bool need_high = opt.scheme != Scheme::first;
  const bool need_low = opt.scheme != Scheme::beam_warming;
  const int second = second_derivative_term(Dim, axis);

  parallel_chunks(n, threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    StencilBuilder<Dim> builder(opt.stencil);
    std::vector<Neighbor> nbrs, side_buf, left, right;
    Stencil sl, sr;
    AxisStats local;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& p = particles[i];
      if (p.phase != Phase::fluid) continue;
      cloud.index.query_radius(pos[i], opt.search_radius, i, nbrs);
      one_sided_neighbors<Dim>(pos, i, nbrs, axis, Side::left, side_buf, opt.stencil.min_offset_ratio);
      balance_interleave<Dim>(pos, i, side_buf, axis, left);
      one_sided_neighbors<Dim>(pos, i, nbrs, axis, Side::right, side_buf, opt.stencil.min_offset_ratio);
      balance_interleave<Dim>(pos, i, side_buf, axis, right);

      AxisDerivatives high, low;
      bool high_ok = false, low_ok = false;
      if (need_high) {
        high_ok = builder.fit(pos, i, left, 2, sl) && builder.fit(pos, i, right, 2, sr);
        if (high_ok) {
          high.u_xl = sl.apply(axis, uvals, i);
          high.u_xr = sr.apply(axis, uvals, i);
          high.p_xl = sl.apply(axis, pvals, i);
          high.p_xr = sr.apply(axis, pvals, i);
          high.u_xxl = sl.apply(second, uvals, i);
          high.u_xxr = sr.apply(second, uvals, i);
          high.p_xxl = sl.apply(second, pvals, i);
          high.p_xxr = sr.apply(second, pvals, i);
          high.order_left = high.order_right = 2;
        } else {
          ++local.order_fallbacks;
        }
      }
      if (need_low || !high_ok) {
        low_ok = builder.fit(pos, i, left, 1, sl) && builder.fit(pos, i, right, 1, sr);
        if (low_ok) {
          low.u_xl = sl.apply(axis, uvals, i);
          low.u_xr = sr.apply(axis, uvals, i);
          low.p_xl = sl.apply(axis, pvals, i);
          low.p_xr = sr.apply(axis, pvals, i);
        }
      }
      if (!high_ok && !low_ok)
        throw InsufficientNeighborhoodError("particle " + std::to_string(i) + ": no one-sided fit along axis " +
                                            std::to_string(axis));

      const double K = k_coefficient(eos, p.pressure, p.specific_volume);
      const double v0 =
          v0_scale * (opt.v0_reference == V0Reference::initial && !initial_volume.empty() ? initial_volume[i]
                                                                                           : p.specific_volume);
      StateRates r;
      if (!high_ok) {
        r = rates_first_order(low, K, v0);
      } else if (opt.scheme == Scheme::beam_warming || !low_ok) {
        r = rates_beam_warming(high, K, v0, tau);
        local.phi_sum += 1.0;
      } else {
        const double phi = limiter_phi(smoothness_theta(low, opt.delta_div, opt.theta_form));
        r = limited_rates(rates_first_order(low, K, v0), rates_beam_warming(high, K, v0, tau), phi);
        local.phi_sum += phi;
      }
      rates[i] = r;
      ++local.updated;
    }
    chunk_stats[chunk] = local;
  });
  if (stats)
    for (const auto& s : chunk_stats) *stats += s;
  return rates;
}

/// Forward Euler on (V, u_axis, P) of fluid particles. Throws StepFailure on
/// V <= 0 or non-finite results.
template <int Dim>
void advance_states(ParticleSet<Dim>& particles, std::span<const StateRates> rates, int axis, double dt) {
  if (!(dt > 0.0)) throw DomainError("advance_states: dt must be positive");
  for (std::size_t i = 0; i < particles.size(); ++i) {
    auto& p = particles[i];
    if (p.phase != Phase::fluid) continue;
    p.specific_volume += dt * rates[i].v_t;
    p.velocity[axis] += dt * rates[i].u_t;
    p.pressure += dt * rates[i].p_t;
    if (!(p.specific_volume > 0.0) || !std::isfinite(p.specific_volume) || !std::isfinite(p.pressure) ||
        !std::isfinite(p.velocity[axis]))
      throw StepFailure("particle " + std::to_string(i) + ": inadmissible state after update (V = " +
                        std::to_string(p.specific_volume) + ")");
  }
}

/// x += dt/2 (u_old + u_new) along `axis` for fluid particles.
template <int Dim>
void advance_positions(ParticleSet<Dim>& particles, std::span<const double> u_old, int axis, double dt) {
  for (std::size_t i = 0; i < particles.size(); ++i) {
    auto& p = particles[i];
    if (p.phase != Phase::fluid) continue;
    p.position[axis] += 0.5 * dt * (u_old[i] + p.velocity[axis]);
  }
}

/// One axis substep: rates from the snapshot `in`, result written to a copy.
template <int Dim>
ParticleSet<Dim> axis_step(const ParticleSet<Dim>& in, const Boundary<Dim>& boundary, int axis, double tau,
                           double multiplier, const EosModel& eos, const SolverOptions& opt,
                           std::span<const double> initial_volume = {}, AxisStats* stats = nullptr) {
  const auto cloud = build_point_cloud<Dim>(in, boundary, opt);
  const auto rates = compute_axis_rates<Dim>(in, cloud, axis, tau, multiplier, eos, opt, initial_volume, stats);
  ParticleSet<Dim> out = in;
  advance_states<Dim>(out, rates, axis, tau);
  std::vector<double> u_old(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) u_old[i] = in[i].velocity[axis];
  advance_positions<Dim>(out, u_old, axis, multiplier * tau);
  wrap_positions<Dim>(out, boundary);
  return out;
}

}  // namespace lpm
