#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "lpm/core/types.hpp"

namespace lpm {

/// One-sided spatial derivatives along the active axis. `u` is the velocity
/// component of that axis. Second derivatives are meaningful only where the
/// corresponding side achieved a second-order fit.
struct AxisDerivatives {
  double u_xl = 0.0, u_xr = 0.0;
  double p_xl = 0.0, p_xr = 0.0;
  double u_xxl = 0.0, u_xxr = 0.0;
  double p_xxl = 0.0, p_xxr = 0.0;
  int order_left = 1;
  int order_right = 1;

  bool second_order() const { return order_left == 2 && order_right == 2; }
};

/// Time derivatives of (V, u_axis, P).
struct StateRates {
  double v_t = 0.0;
  double u_t = 0.0;
  double p_t = 0.0;

  bool operator==(const StateRates&) const = default;
};

/// Upwind rates: left derivatives feed the right-running characteristic and
/// vice versa.
inline StateRates rates_first_order(const AxisDerivatives& d, double K, double V0) {
  const double sk = std::sqrt(K);
  StateRates r;
  r.v_t = 0.5 * V0 * (d.u_xr + d.u_xl) - 0.5 * V0 / sk * (d.p_xr - d.p_xl);
  r.u_t = 0.5 * V0 * sk * (d.u_xr - d.u_xl) - 0.5 * V0 * (d.p_xr + d.p_xl);
  r.p_t = -0.5 * V0 * K * (d.u_xr + d.u_xl) + 0.5 * V0 * sk * (d.p_xr - d.p_xl);
  return r;
}

/// Modified Beam-Warming rates: the upwind rates plus the (dt/2) A^2 U_xx
/// correction split by characteristic family.
inline StateRates rates_beam_warming(const AxisDerivatives& d, double K, double V0, double dt) {
  StateRates r = rates_first_order(d, K, V0);
  const double sk = std::sqrt(K);
  const double v2 = V0 * V0;
  const double c = 0.25 * dt;
  r.v_t += c * (v2 * sk * (d.u_xxr - d.u_xxl) - v2 * (d.p_xxr + d.p_xxl));
  r.u_t += c * (v2 * K * (d.u_xxr + d.u_xxl) - v2 * sk * (d.p_xxr - d.p_xxl));
  r.p_t += c * (-v2 * K * sk * (d.u_xxr - d.u_xxl) + v2 * K * (d.p_xxr + d.p_xxl));
  return r;
}

enum class ThetaForm { symmetric, one_sided };

/// "Arbitrarily large" smoothness ratio.
inline constexpr double kThetaSentinel = std::numeric_limits<double>::infinity();

/// Ratio of left to right one-sided derivatives (or its symmetric average).
/// A denominator below `delta_div` in magnitude yields the sentinel.
inline double smoothness_ratio(double left, double right, double delta_div, ThetaForm form) {
  if (form == ThetaForm::one_sided) {
    if (std::abs(right) < delta_div) return kThetaSentinel;
    return left / right;
  }
  if (std::abs(right) < delta_div || std::abs(left) < delta_div) return kThetaSentinel;
  return 0.5 * (left / right + right / left);
}

/// theta = min(theta(u), theta(P)) from first-order one-sided derivatives.
/// A sentinel in either ratio makes the result the sentinel.
inline double smoothness_theta(const AxisDerivatives& first_order, double delta_div,
                               ThetaForm form = ThetaForm::symmetric) {
  const double tu = smoothness_ratio(first_order.u_xl, first_order.u_xr, delta_div, form);
  const double tp = smoothness_ratio(first_order.p_xl, first_order.p_xr, delta_div, form);
  if (std::isinf(tu) || std::isinf(tp)) return kThetaSentinel;
  return std::min(tu, tp);
}

/// Van Leer limiter, zero for non-positive or sentinel theta.
inline double limiter_phi(double theta) {
  if (!(theta > 0.0) || std::isinf(theta) || std::isnan(theta)) return 0.0;
  return (std::abs(theta) + theta) / (1.0 + std::abs(theta));
}

/// low + phi (high - low), componentwise.
inline StateRates limited_rates(const StateRates& low, const StateRates& high, double phi) {
  return {low.v_t + phi * (high.v_t - low.v_t), low.u_t + phi * (high.u_t - low.u_t),
          low.p_t + phi * (high.p_t - low.p_t)};
}

}  // namespace lpm
