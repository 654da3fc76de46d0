#pragma once

#include <cmath>
#include <stdexcept>

#include "lpm/core/eos.hpp"

namespace lpm {

struct PrimitiveState {
  double rho = 1.0;
  double u = 0.0;
  double p = 0.0;
};

/// Exact Riemann solver for a (stiffened) polytropic gas. The stiffened gas is
/// an ideal gas in the shifted pressure p + P_inf, so the ideal-gas solution
/// applies to the shifted variable.
class ExactRiemannSolver {
 public:
  ExactRiemannSolver(const EosModel& eos, PrimitiveState left, PrimitiveState right)
      : g_(eos.gamma), pinf_(eos.p_infinity), l_(left), r_(right) {
    l_.p += pinf_;
    r_.p += pinf_;
    cl_ = std::sqrt(g_ * l_.p / l_.rho);
    cr_ = std::sqrt(g_ * r_.p / r_.rho);
    if (2.0 * (cl_ + cr_) / (g_ - 1.0) <= r_.u - l_.u) throw DomainError("ExactRiemannSolver: vacuum generated");
    solve_star();
  }

  double star_pressure() const { return p_star_ - pinf_; }
  double star_velocity() const { return u_star_; }

  /// State at similarity coordinate xi = (x - x0) / t.
  PrimitiveState sample(double xi) const {
    PrimitiveState w;
    if (xi <= u_star_) {
      w = sample_side(xi, l_, cl_, -1.0);
    } else {
      w = sample_side(xi, r_, cr_, 1.0);
    }
    w.p -= pinf_;
    return w;
  }

 private:
  // Pressure function f_K and its derivative (shifted pressures).
  void f_side(double p, const PrimitiveState& s, double c, double& f, double& df) const {
    if (p > s.p) {
      const double A = 2.0 / ((g_ + 1.0) * s.rho);
      const double B = (g_ - 1.0) / (g_ + 1.0) * s.p;
      const double q = std::sqrt(A / (p + B));
      f = (p - s.p) * q;
      df = q * (1.0 - 0.5 * (p - s.p) / (B + p));
    } else {
      const double e = (g_ - 1.0) / (2.0 * g_);
      f = 2.0 * c / (g_ - 1.0) * (std::pow(p / s.p, e) - 1.0);
      df = 1.0 / (s.rho * c) * std::pow(p / s.p, -(g_ + 1.0) / (2.0 * g_));
    }
  }

  void solve_star() {
    const double du = r_.u - l_.u;
    double p = std::max(1e-12 * (l_.p + r_.p), 0.5 * (l_.p + r_.p) - 0.125 * du * (l_.rho + r_.rho) * (cl_ + cr_));
    for (int it = 0; it < 200; ++it) {
      double fl, dfl, fr, dfr;
      f_side(p, l_, cl_, fl, dfl);
      f_side(p, r_, cr_, fr, dfr);
      double next = p - (fl + fr + du) / (dfl + dfr);
      if (next <= 0.0) next = 0.5 * p;
      const double change = 2.0 * std::abs(next - p) / (next + p);
      p = next;
      if (change < 1e-15) break;
    }
    double fl, dfl, fr, dfr;
    f_side(p, l_, cl_, fl, dfl);
    f_side(p, r_, cr_, fr, dfr);
    p_star_ = p;
    u_star_ = 0.5 * (l_.u + r_.u) + 0.5 * (fr - fl);
  }

  // dir = -1 for the left wave family, +1 for the right one.
  PrimitiveState sample_side(double xi, const PrimitiveState& s, double c, double dir) const {
    const double gm = (g_ - 1.0) / (g_ + 1.0);
    if (p_star_ > s.p) {
      const double ratio = p_star_ / s.p;
      const double shock = s.u + dir * c * std::sqrt((g_ + 1.0) / (2.0 * g_) * ratio + (g_ - 1.0) / (2.0 * g_));
      if (dir * (xi - shock) >= 0.0) return s;
      return {s.rho * (ratio + gm) / (gm * ratio + 1.0), u_star_, p_star_};
    }
    const double c_star = c * std::pow(p_star_ / s.p, (g_ - 1.0) / (2.0 * g_));
    const double head = s.u + dir * c;
    const double tail = u_star_ + dir * c_star;
    if (dir * (xi - head) >= 0.0) return s;
    if (dir * (xi - tail) <= 0.0) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g_), u_star_, p_star_};
    const double f = 2.0 / (g_ + 1.0) - dir * gm / c * (s.u - xi);
    const double rho = s.rho * std::pow(f, 2.0 / (g_ - 1.0));
    const double u = 2.0 / (g_ + 1.0) * (-dir * c + (g_ - 1.0) / 2.0 * s.u + xi);
    return {rho, u, s.p * std::pow(f, 2.0 * g_ / (g_ - 1.0))};
  }

  double g_, pinf_;
  PrimitiveState l_, r_;
  double cl_ = 0.0, cr_ = 0.0;
  double p_star_ = 0.0, u_star_ = 0.0;
};

}  // namespace lpm
