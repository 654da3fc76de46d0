#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "lpm/core/types.hpp"

namespace lpm {

enum class Field { pressure, velocity, volume };

inline const char* field_name(Field f) {
  switch (f) {
    case Field::pressure: return "pressure";
    case Field::velocity: return "velocity";
    case Field::volume: return "volume";
  }
  return "?";
}

template <int Dim>
double field_value(const Particle<Dim>& p, Field f) {
  switch (f) {
    case Field::pressure: return p.pressure;
    case Field::velocity: return p.velocity[0];
    case Field::volume: return p.specific_volume;
  }
  return 0.0;
}

/// Sampled 1D reference with linear interpolation between samples; periodic
/// references wrap queries into [lo, hi).
struct ReferenceSolution1d {
  std::vector<double> x;
  std::vector<double> V, u, P;
  bool periodic = false;
  double lo = 0.0, hi = 0.0;

  const std::vector<double>& values(Field f) const {
    switch (f) {
      case Field::pressure: return P;
      case Field::velocity: return u;
      case Field::volume: return V;
    }
    return P;
  }

  double operator()(Field f, const Vec<1>& q) const { return (*this)(f, q[0]); }

  double operator()(Field f, double q) const {
    const auto& v = values(f);
    if (x.empty()) throw DomainError("ReferenceSolution1d: empty reference");
    if (x.size() == 1) return v[0];
    if (periodic) {
      const double L = hi - lo;
      q = lo + std::fmod(q - lo, L);
      if (q < lo) q += L;
      if (q < x.front() || q >= x.back()) {
        const double xa = x.back(), xb = x.front() + L;
        const double qq = q < x.front() ? q + L : q;
        const double t = (qq - xa) / (xb - xa);
        return v.back() + t * (v.front() - v.back());
      }
    } else {
      if (q <= x.front()) return v.front();
      if (q >= x.back()) return v.back();
    }
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    const auto k = static_cast<std::size_t>(it - x.begin());
    const double t = (q - x[k - 1]) / (x[k] - x[k - 1]);
    return v[k - 1] + t * (v[k] - v[k - 1]);
  }
};

/// sqrt(sum (f_j - f_ref(x_j))^2) / sqrt(sum f_ref(x_j)^2) over fluid particles.
template <int Dim, class Ref>
double relative_l2_error(const ParticleSet<Dim>& particles, Ref&& reference, Field field = Field::pressure) {
  double num = 0.0, den = 0.0;
  for (const auto& p : particles) {
    if (p.phase != Phase::fluid) continue;
    const double r = reference(field, p.position);
    const double e = field_value(p, field) - r;
    num += e * e;
    den += r * r;
  }
  if (!(den > 0.0)) throw DomainError("relative_l2_error: reference is identically zero");
  return std::sqrt(num) / std::sqrt(den);
}

/// Relative L2 difference between two sample vectors.
inline double relative_l2(std::span<const double> a, std::span<const double> ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ref[i]) * (a[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  if (!(den > 0.0)) throw DomainError("relative_l2: reference is identically zero");
  return std::sqrt(num / den);
}

}  // namespace lpm
