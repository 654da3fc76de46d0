#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "lpm/core/types.hpp"

namespace lpm {

enum class EosKind { polytropic, stiffened_polytropic };

/// Polytropic (p_infinity = 0) or stiffened polytropic equation of state
///   e(P, V) = (P + gamma * p_infinity) V / (gamma - 1).
struct EosModel {
  EosKind kind = EosKind::polytropic;
  double gamma = 1.4;
  double p_infinity = 0.0;

  static EosModel polytropic(double gamma) { return make(EosKind::polytropic, gamma, 0.0); }

  static EosModel stiffened(double gamma, double p_infinity) {
    return make(EosKind::stiffened_polytropic, gamma, p_infinity);
  }

  static EosModel make(EosKind kind, double gamma, double p_infinity) {
    if (!(gamma > 1.0)) throw DomainError("EOS: gamma must exceed 1, got " + std::to_string(gamma));
    if (!(p_infinity >= 0.0))
      throw DomainError("EOS: p_infinity must be non-negative, got " + std::to_string(p_infinity));
    if (kind == EosKind::polytropic && p_infinity != 0.0)
      throw DomainError("EOS: polytropic gas has p_infinity = 0");
    return EosModel{kind, gamma, p_infinity};
  }

  bool operator==(const EosModel&) const = default;
};

namespace detail {
inline void require_positive_volume(double V) {
  if (!(V > 0.0)) throw DomainError("EOS: specific volume must be positive, got " + std::to_string(V));
}
}  // namespace detail

/// Specific internal energy e(P, V).
inline double internal_energy(const EosModel& eos, double P, double V) {
  detail::require_positive_volume(V);
  return (P + eos.gamma * eos.p_infinity) * V / (eos.gamma - 1.0);
}

/// Inverse of internal_energy in P (the EOS is linear in P).
inline double pressure_from_energy(const EosModel& eos, double e, double V) {
  detail::require_positive_volume(V);
  return (eos.gamma - 1.0) * e / V - eos.gamma * eos.p_infinity;
}

/// K = (P + de/dV) / (de/dP); empty when K <= 0 (hyperbolicity lost).
inline std::optional<double> try_k_coefficient(const EosModel& eos, double P, double V) {
  detail::require_positive_volume(V);
  // de/dV = (P + g Pinf)/(g-1), de/dP = V/(g-1)  =>  K = g (P + Pinf) / V
  const double K = eos.gamma * (P + eos.p_infinity) / V;
  if (!(K > 0.0)) return std::nullopt;
  return K;
}

inline double k_coefficient(const EosModel& eos, double P, double V) {
  auto K = try_k_coefficient(eos, P, V);
  if (!K)
    throw HyperbolicityError("K <= 0 at P=" + std::to_string(P) + ", V=" + std::to_string(V));
  return *K;
}

/// Eulerian sound speed c = V sqrt(K), i.e. sqrt(gamma (P + Pinf) V).
inline double sound_speed(const EosModel& eos, double P, double V) {
  return V * std::sqrt(k_coefficient(eos, P, V));
}

/// Specific total energy e + |u|^2 / 2. Diagnostic only; never evolved.
template <int Dim>
double total_energy(const EosModel& eos, double P, double V, const Vec<Dim>& u) {
  double ke = 0.0;
  for (int d = 0; d < Dim; ++d) ke += 0.5 * u[d] * u[d];
  return internal_energy(eos, P, V) + ke;
}

}  // namespace lpm
