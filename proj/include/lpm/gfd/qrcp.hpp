#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lpm/core/types.hpp"
#include "lpm/gfd/taylor.hpp"

namespace lpm {

/// Householder QR with column pivoting, A P = Q R, |R_11| >= |R_22| >= ...
/// Sized for the small local systems of the particle fits; storage is reused
/// across factorizations.
class PivotedQR {
 public:
  /// Factorizes the m x n column-major matrix `a`.
  void factorize(int m, int n, std::span<const double> a) {
    m_ = m;
    n_ = n;
    k_ = std::min(m, n);
    qr_.assign(a.begin(), a.begin() + static_cast<long>(m) * n);
    beta_.assign(static_cast<std::size_t>(k_), 0.0);
    perm_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) perm_[static_cast<std::size_t>(j)] = j;
    norms_.assign(static_cast<std::size_t>(n), 0.0);

    for (int j = 0; j < k_; ++j) {
      // Pivot: trailing column with the largest remaining norm.
      int best = j;
      double best_norm = -1.0;
      for (int c = j; c < n; ++c) {
        double s = 0.0;
        for (int i = j; i < m; ++i) s += col(c)[i] * col(c)[i];
        norms_[static_cast<std::size_t>(c)] = s;
        if (s > best_norm) {
          best_norm = s;
          best = c;
        }
      }
      if (best != j) {
        std::swap_ranges(col(j), col(j) + m, col(best));
        std::swap(perm_[static_cast<std::size_t>(j)], perm_[static_cast<std::size_t>(best)]);
      }
      // Householder vector stored in place below the diagonal, v_j = 1 implicit.
      double* x = col(j);
      const double alpha = std::sqrt(std::max(best_norm, 0.0));
      if (alpha == 0.0) {
        beta_[static_cast<std::size_t>(j)] = 0.0;
        continue;
      }
      const double r = x[j] >= 0.0 ? -alpha : alpha;
      const double v0 = x[j] - r;
      for (int i = j + 1; i < m; ++i) x[i] /= v0;
      double vtv = 1.0;
      for (int i = j + 1; i < m; ++i) vtv += x[i] * x[i];
      const double beta = 2.0 / vtv;
      beta_[static_cast<std::size_t>(j)] = beta;
      x[j] = r;
      for (int c = j + 1; c < n; ++c) {
        double* y = col(c);
        double s = y[j];
        for (int i = j + 1; i < m; ++i) s += x[i] * y[i];
        s *= beta;
        y[j] -= s;
        for (int i = j + 1; i < m; ++i) y[i] -= s * x[i];
      }
    }
  }

  void factorize(const TaylorSystem& sys) { factorize(sys.rows, sys.cols, sys.a); }

  int rows() const { return m_; }
  int cols() const { return n_; }
  double r(int i, int j) const { return qr_[static_cast<std::size_t>(j) * m_ + i]; }
  std::span<const int> permutation() const { return perm_; }

  /// Effective rank: k-1 for the first (1-based) k with |R_kk| < eps |R_11|;
  /// min(m, n) when no diagonal entry falls below the threshold.
  int effective_rank(double eps) const {
    if (k_ == 0) return 0;
    const double r11 = std::abs(r(0, 0));
    if (r11 == 0.0) return 0;
    for (int k = 0; k < k_; ++k)
      if (std::abs(r(k, k)) < eps * r11) return k;
    return k_;
  }

  /// Applies Q^T to b in place.
  void apply_qt(std::span<double> b) const {
    for (int j = 0; j < k_; ++j) {
      const double beta = beta_[static_cast<std::size_t>(j)];
      if (beta == 0.0) continue;
      const double* v = ccol(j);
      double s = b[static_cast<std::size_t>(j)];
      for (int i = j + 1; i < m_; ++i) s += v[i] * b[static_cast<std::size_t>(i)];
      s *= beta;
      b[static_cast<std::size_t>(j)] -= s;
      for (int i = j + 1; i < m_; ++i) b[static_cast<std::size_t>(i)] -= s * v[i];
    }
  }

  /// Applies Q to b in place.
  void apply_q(std::span<double> b) const {
    for (int j = k_ - 1; j >= 0; --j) {
      const double beta = beta_[static_cast<std::size_t>(j)];
      if (beta == 0.0) continue;
      const double* v = ccol(j);
      double s = b[static_cast<std::size_t>(j)];
      for (int i = j + 1; i < m_; ++i) s += v[i] * b[static_cast<std::size_t>(i)];
      s *= beta;
      b[static_cast<std::size_t>(j)] -= s;
      for (int i = j + 1; i < m_; ++i) b[static_cast<std::size_t>(i)] -= s * v[i];
    }
  }

  /// x = P [R11^{-1} c1; 0] with c = Q^T b and R11 the leading rank x rank block.
  void solve(std::span<const double> b, int rank, std::span<double> x) const {
    std::vector<double> c(b.begin(), b.end());
    apply_qt(c);
    std::vector<double> z(static_cast<std::size_t>(rank));
    for (int i = rank - 1; i >= 0; --i) {
      double s = c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < rank; ++j) s -= r(i, j) * z[static_cast<std::size_t>(j)];
      z[static_cast<std::size_t>(i)] = s / r(i, i);
    }
    std::fill(x.begin(), x.end(), 0.0);
    for (int i = 0; i < rank; ++i) x[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = z[static_cast<std::size_t>(i)];
  }

  /// Row `term` of the rank-truncated pseudoinverse P [R11^{-1} 0; 0 0] Q^T,
  /// written into `w` (length m). Zero when the term lies beyond the rank.
  void pseudoinverse_row(int term, int rank, std::span<double> w) const {
    std::fill(w.begin(), w.end(), 0.0);
    int p = -1;
    for (int i = 0; i < rank; ++i)
      if (perm_[static_cast<std::size_t>(i)] == term) p = i;
    if (p < 0) return;
    // y solves R11^T y = e_p (forward substitution), then w = Q [y; 0].
    for (int i = 0; i < rank; ++i) {
      double s = i == p ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) s -= r(j, i) * w[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = s / r(i, i);
    }
    apply_q(w);
  }

 private:
  double* col(int j) { return qr_.data() + static_cast<std::size_t>(j) * m_; }
  const double* ccol(int j) const { return qr_.data() + static_cast<std::size_t>(j) * m_; }

  int m_ = 0, n_ = 0, k_ = 0;
  std::vector<double> qr_;
  std::vector<double> beta_;
  std::vector<int> perm_;
  std::vector<double> norms_;
};

struct QrSolution {
  std::vector<double> theta;
  int effective_rank = 0;
};

/// Least-squares solve of a Taylor system by pivoted QR with rank truncation.
inline QrSolution solve_qrcp(const TaylorSystem& sys, double epsilon) {
  if (sys.rows < 1) throw DegenerateStencilError("solve_qrcp: empty system");
  PivotedQR qr;
  qr.factorize(sys);
  if (qr.r(0, 0) == 0.0) throw DegenerateStencilError("solve_qrcp: all stencil offsets vanish");
  QrSolution out;
  out.effective_rank = qr.effective_rank(epsilon);
  out.theta.assign(static_cast<std::size_t>(sys.cols), 0.0);
  qr.solve(sys.b, out.effective_rank, out.theta);
  return out;
}

}  // namespace lpm
