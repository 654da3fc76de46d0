#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpm/core/types.hpp"

namespace lpm {

/// Number of Taylor unknowns for a fit of the given order (1 or 2).
constexpr int taylor_terms(int dim, int order) { return order == 1 ? dim : dim + dim * (dim + 1) / 2; }

/// Polynomial degree of Taylor column `c` (1 for first derivatives, 2 otherwise).
constexpr int term_degree(int dim, int c) { return c < dim ? 1 : 2; }

/// Column index of the pure second derivative along `axis`.
constexpr int second_derivative_term(int dim, int axis) { return dim + axis; }

/// Local least-squares system A theta = b. A is stored column-major
/// (rows = neighbours). Columns: h, k, g, then h^2/2, k^2/2, g^2/2, hk, hg, kg
/// as the dimension allows.
struct TaylorSystem {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;
  std::vector<double> b;

  double& at(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }
};

/// Fills one Taylor row for offset `h` (already divided by the length scale).
template <int Dim>
void taylor_row(const Vec<Dim>& h, int order, std::span<double> row) {
  for (int d = 0; d < Dim; ++d) row[d] = h[d];
  if (order < 2) return;
  int c = Dim;
  for (int d = 0; d < Dim; ++d) row[c++] = 0.5 * h[d] * h[d];
  for (int d = 0; d < Dim; ++d)
    for (int e = d + 1; e < Dim; ++e) row[c++] = h[d] * h[e];
}

/// Builds the system for `center` and the neighbours `ids`. Offsets are divided
/// by `length_scale`; the solution then carries derivative estimates multiplied
/// by length_scale^degree.
template <int Dim>
TaylorSystem assemble_taylor(std::span<const Vec<Dim>> positions, std::size_t center, std::span<const std::size_t> ids,
                             std::span<const double> values, int order, double length_scale = 1.0) {
  TaylorSystem sys;
  sys.rows = static_cast<int>(ids.size());
  sys.cols = taylor_terms(Dim, order);
  sys.a.assign(static_cast<std::size_t>(sys.rows) * sys.cols, 0.0);
  sys.b.assign(static_cast<std::size_t>(sys.rows), 0.0);
  std::vector<double> row(static_cast<std::size_t>(sys.cols));
  const double inv = 1.0 / length_scale;
  for (int i = 0; i < sys.rows; ++i) {
    Vec<Dim> h;
    for (int d = 0; d < Dim; ++d) h[d] = (positions[ids[i]][d] - positions[center][d]) * inv;
    taylor_row<Dim>(h, order, row);
    for (int j = 0; j < sys.cols; ++j) sys.at(i, j) = row[static_cast<std::size_t>(j)];
    if (!values.empty()) sys.b[static_cast<std::size_t>(i)] = values[ids[i]] - values[center];
  }
  return sys;
}

}  // namespace lpm
