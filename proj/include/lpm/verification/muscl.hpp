#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "lpm/core/eos.hpp"
#include "lpm/verification/norms.hpp"
#include "lpm/verification/riemann.hpp"

namespace lpm {

enum class GridBoundary { periodic, transmissive, reflective };

/// Eulerian 1D MUSCL-Hancock scheme with van Leer slopes on primitive
/// variables and HLLC fluxes, for a (stiffened) polytropic gas.
class MusclSolver {
 public:
  using Cons = std::array<double, 3>;

  MusclSolver(const EosModel& eos, double lo, double hi, std::size_t cells, GridBoundary bc, double cfl = 0.8)
      : eos_(eos), lo_(lo), hi_(hi), n_(cells), bc_(bc), cfl_(cfl), dx_((hi - lo) / static_cast<double>(cells)) {
    if (cells < 4) throw DomainError("MusclSolver: need at least 4 cells");
    w_.assign(n_ + 4, PrimitiveState{});
  }

  double cell_center(std::size_t i) const { return lo_ + (static_cast<double>(i) + 0.5) * dx_; }
  std::size_t cells() const { return n_; }
  double time() const { return t_; }

  void initialize(const std::function<PrimitiveState(double)>& f) {
    for (std::size_t i = 0; i < n_; ++i) w_[i + 2] = f(cell_center(i));
    t_ = 0.0;
  }

  PrimitiveState state(std::size_t i) const { return w_[i + 2]; }

  void advance_to(double t_end) {
    while (t_ < t_end * (1.0 - 1e-15)) {
      fill_ghosts();
      double smax = 0.0;
      for (std::size_t i = 2; i < n_ + 2; ++i) smax = std::max(smax, std::abs(w_[i].u) + sound(w_[i]));
      const double dt = std::min(cfl_ * dx_ / smax, t_end - t_);
      step(dt);
      t_ += dt;
    }
  }

  /// Cell-centred samples as a reference field.
  ReferenceSolution1d reference() const {
    ReferenceSolution1d r;
    r.periodic = bc_ == GridBoundary::periodic;
    r.lo = lo_;
    r.hi = hi_;
    for (std::size_t i = 0; i < n_; ++i) {
      r.x.push_back(cell_center(i));
      r.V.push_back(1.0 / w_[i + 2].rho);
      r.u.push_back(w_[i + 2].u);
      r.P.push_back(w_[i + 2].p);
    }
    return r;
  }

 private:
  double sound(const PrimitiveState& w) const { return std::sqrt(eos_.gamma * (w.p + eos_.p_infinity) / w.rho); }

  Cons to_cons(const PrimitiveState& w) const {
    const double e = (w.p + eos_.gamma * eos_.p_infinity) / ((eos_.gamma - 1.0) * w.rho);
    return {w.rho, w.rho * w.u, w.rho * (e + 0.5 * w.u * w.u)};
  }

  PrimitiveState to_prim(const Cons& c) const {
    const double rho = c[0];
    const double u = c[1] / rho;
    const double e = c[2] / rho - 0.5 * u * u;
    return {rho, u, (eos_.gamma - 1.0) * rho * e - eos_.gamma * eos_.p_infinity};
  }

  Cons flux(const PrimitiveState& w, const Cons& c) const { return {c[1], c[1] * w.u + w.p, (c[2] + w.p) * w.u}; }

  Cons hllc(const PrimitiveState& l, const PrimitiveState& r) const {
    const double cl = sound(l), cr = sound(r);
    const double sl = std::min(l.u - cl, r.u - cr);
    const double sr = std::max(l.u + cl, r.u + cr);
    const Cons ul = to_cons(l), ur = to_cons(r);
    if (sl >= 0.0) return flux(l, ul);
    if (sr <= 0.0) return flux(r, ur);
    const double ml = l.rho * (sl - l.u), mr = r.rho * (sr - r.u);
    const double ss = (r.p - l.p + l.u * ml - r.u * mr) / (ml - mr);
    auto star = [&](const PrimitiveState& w, const Cons& u, double s) {
      const double f = w.rho * (s - w.u) / (s - ss);
      return Cons{f, f * ss, f * (u[2] / w.rho + (ss - w.u) * (ss + w.p / (w.rho * (s - w.u))))};
    };
    if (ss >= 0.0) {
      const Cons fl = flux(l, ul), us = star(l, ul, sl);
      return {fl[0] + sl * (us[0] - ul[0]), fl[1] + sl * (us[1] - ul[1]), fl[2] + sl * (us[2] - ul[2])};
    }
    const Cons fr = flux(r, ur), us = star(r, ur, sr);
    return {fr[0] + sr * (us[0] - ur[0]), fr[1] + sr * (us[1] - ur[1]), fr[2] + sr * (us[2] - ur[2])};
  }

  void fill_ghosts() {
    for (std::size_t g = 0; g < 2; ++g) {
      switch (bc_) {
        case GridBoundary::periodic:
          w_[g] = w_[n_ + g];
          w_[n_ + 2 + g] = w_[2 + g];
          break;
        case GridBoundary::transmissive:
          w_[g] = w_[2];
          w_[n_ + 2 + g] = w_[n_ + 1];
          break;
        case GridBoundary::reflective:
          w_[1 - g] = w_[2 + g];
          w_[1 - g].u = -w_[1 - g].u;
          w_[n_ + 2 + g] = w_[n_ + 1 - g];
          w_[n_ + 2 + g].u = -w_[n_ + 2 + g].u;
          break;
      }
    }
  }

  static double van_leer(double a, double b) { return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

  void step(double dt) {
    const std::size_t m = n_ + 4;
    std::vector<PrimitiveState> wl(m), wr(m);
    const double k = 0.5 * dt / dx_;
    for (std::size_t i = 1; i + 1 < m; ++i) {
      const auto& a = w_[i - 1];
      const auto& b = w_[i];
      const auto& c = w_[i + 1];
      const double dr = van_leer(b.rho - a.rho, c.rho - b.rho);
      const double du = van_leer(b.u - a.u, c.u - b.u);
      const double dp = van_leer(b.p - a.p, c.p - b.p);
      const double rc2 = eos_.gamma * (b.p + eos_.p_infinity);
      // Half-step evolution with the primitive quasi-linear matrix.
      const PrimitiveState shift{-k * (b.u * dr + b.rho * du), -k * (b.u * du + dp / b.rho),
                                 -k * (rc2 * du + b.u * dp)};
      wl[i] = {b.rho - 0.5 * dr + shift.rho, b.u - 0.5 * du + shift.u, b.p - 0.5 * dp + shift.p};
      wr[i] = {b.rho + 0.5 * dr + shift.rho, b.u + 0.5 * du + shift.u, b.p + 0.5 * dp + shift.p};
    }
    std::vector<Cons> f(m);
    for (std::size_t i = 1; i + 2 < m; ++i) f[i] = hllc(wr[i], wl[i + 1]);  // interface i+1/2
    const double r = dt / dx_;
    for (std::size_t i = 2; i < n_ + 2; ++i) {
      Cons u = to_cons(w_[i]);
      for (int q = 0; q < 3; ++q) u[q] -= r * (f[i][q] - f[i - 1][q]);
      w_[i] = to_prim(u);
    }
  }

  EosModel eos_;
  double lo_, hi_;
  std::size_t n_;
  GridBoundary bc_;
  double cfl_;
  double dx_;
  double t_ = 0.0;
  std::vector<PrimitiveState> w_;
};

}  // namespace lpm
