#pragma once

#include <array>
#include <cmath>

#include "lpm/core/types.hpp"

namespace lpm {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Eigen-decomposition A = R diag(lambda) R^{-1} of the quasi-linear matrix
///   A = V0 [[0, -1, 0], [0, 0, 1], [0, K, 0]]
/// acting on U = (V, u, P).
struct CharacteristicSystem {
  double k = 0.0;
  double v0 = 0.0;
  Mat3 r{};
  Mat3 r_inverse{};
  std::array<double, 3> lambda{};
};

inline Mat3 quasi_linear_matrix(double K, double V0) {
  return Mat3{{{0.0, -V0, 0.0}, {0.0, 0.0, V0}, {0.0, V0 * K, 0.0}}};
}

inline Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

inline Mat3 diagonal(const std::array<double, 3>& d) {
  return Mat3{{{d[0], 0.0, 0.0}, {0.0, d[1], 0.0}, {0.0, 0.0, d[2]}}};
}

inline CharacteristicSystem characteristic_system(double K, double V0) {
  if (!(K > 0.0)) throw DomainError("characteristic_system: K must be positive");
  if (!(V0 > 0.0)) throw DomainError("characteristic_system: V0 must be positive");
  const double sk = std::sqrt(K);
  CharacteristicSystem cs;
  cs.k = K;
  cs.v0 = V0;
  cs.r = Mat3{{{1.0, 1.0, 1.0}, {0.0, -sk, sk}, {0.0, -K, -K}}};
  cs.r_inverse = Mat3{{{1.0, 0.0, 1.0 / K},
                       {0.0, -0.5 / sk, -0.5 / K},
                       {0.0, 0.5 / sk, -0.5 / K}}};
  cs.lambda = {0.0, V0 * sk, -V0 * sk};
  return cs;
}

/// R diag(lambda) R^{-1}.
inline Mat3 reconstruct(const CharacteristicSystem& cs) {
  return multiply(multiply(cs.r, diagonal(cs.lambda)), cs.r_inverse);
}

}  // namespace lpm
