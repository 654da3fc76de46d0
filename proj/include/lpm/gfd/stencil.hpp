#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "lpm/gfd/qrcp.hpp"
#include "lpm/gfd/taylor.hpp"
#include "lpm/neighbor/neighbor.hpp"

namespace lpm {

enum class Side { left, right };

/// Neighbours strictly on one side of the centre along `axis`. A neighbour
/// counts only if its axis offset exceeds `min_offset_ratio` times its
/// distance; with ratio 0, only the hyperplane x_i == x_0 is excluded.
/// Input order is kept.
template <int Dim>
void one_sided_neighbors(std::span<const Vec<Dim>> positions, std::size_t center, std::span<const Neighbor> sorted,
                         int axis, Side side, std::vector<Neighbor>& out, double min_offset_ratio = 0.0) {
  out.clear();
  const double x0 = positions[center][axis];
  for (const auto& n : sorted) {
    const double off = side == Side::left ? x0 - positions[n.id][axis] : positions[n.id][axis] - x0;
    if (off > 0.0 && off > min_offset_ratio * n.distance) out.push_back(n);
  }
}

template <int Dim>
std::vector<Neighbor> one_sided_neighbors(std::span<const Vec<Dim>> positions, std::size_t center,
                                          std::span<const Neighbor> sorted, int axis, Side side,
                                          double min_offset_ratio = 0.0) {
  std::vector<Neighbor> out;
  one_sided_neighbors<Dim>(positions, center, sorted, axis, side, out, min_offset_ratio);
  return out;
}

/// Transverse group of a neighbour: half-plane (2D, 0 = upper y_i >= y_0) or
/// quadrant (3D, cycled (+,+), (-,+), (-,-), (+,-)).
template <int Dim>
int transverse_group(const Vec<Dim>& p, const Vec<Dim>& c, int axis) {
  if constexpr (Dim == 1) {
    return 0;
  } else if constexpr (Dim == 2) {
    const int t = 1 - axis;
    return p[t] >= c[t] ? 0 : 1;
  } else {
    const int t1 = axis == 0 ? 1 : 0;
    const int t2 = axis == 2 ? 1 : 2;
    const bool a = p[t1] >= c[t1];
    const bool b = p[t2] >= c[t2];
    if (a && b) return 0;
    if (!a && b) return 1;
    if (!a && !b) return 2;
    return 3;
  }
}

/// Reorders a distance-sorted one-sided list so that transverse groups
/// alternate, starting from the group of the nearest neighbour. Order within a
/// group is preserved; exhausted groups are skipped.
template <int Dim>
void balance_interleave(std::span<const Vec<Dim>> positions, std::size_t center, std::span<const Neighbor> one_sided,
                        int axis, std::vector<Neighbor>& out) {
  out.clear();
  if constexpr (Dim == 1) {
    out.assign(one_sided.begin(), one_sided.end());
  } else {
    constexpr int kGroups = Dim == 2 ? 2 : 4;
    std::array<std::vector<Neighbor>, kGroups> groups;
    for (const auto& n : one_sided)
      groups[static_cast<std::size_t>(transverse_group<Dim>(positions[n.id], positions[center], axis))].push_back(n);
    if (one_sided.empty()) return;
    std::array<std::size_t, kGroups> next{};
    int g = transverse_group<Dim>(positions[one_sided.front().id], positions[center], axis);
    while (out.size() < one_sided.size()) {
      auto& grp = groups[static_cast<std::size_t>(g)];
      auto& k = next[static_cast<std::size_t>(g)];
      if (k < grp.size()) out.push_back(grp[k++]);
      g = (g + 1) % kGroups;
    }
  }
}

template <int Dim>
std::vector<Neighbor> balance_interleave(std::span<const Vec<Dim>> positions, std::size_t center,
                                         std::span<const Neighbor> one_sided, int axis) {
  std::vector<Neighbor> out;
  balance_interleave<Dim>(positions, center, one_sided, axis, out);
  return out;
}

struct StencilOptions {
  double epsilon = 1e-3;
  /// Initial stencil sizes; 0 selects the per-dimension default.
  int n_start_order1 = 0;
  int n_start_order2 = 0;
  /// Upper bound on stencil members considered.
  std::size_t max_members = 48;
  /// Minimum ratio of axis offset to distance for one-sided membership.
  double min_offset_ratio = 0.0;

  bool operator==(const StencilOptions&) const = default;
};

/// Default initial stencil size: the unknown count, except 3D order 2 which
/// starts one above (10).
constexpr int default_n_start(int dim, int order) {
  if (dim == 3 && order == 2) return 10;
  return taylor_terms(dim, order);
}

inline int n_start_for(const StencilOptions& opt, int dim, int order) {
  const int v = order == 1 ? opt.n_start_order1 : opt.n_start_order2;
  return v > 0 ? v : default_n_start(dim, order);
}

/// Ordered neighbour ids plus the fitted derivative weights: the estimate of
/// Taylor term c is sum_i weights[c * size + i] * (U_{ids[i]} - U_0).
struct Stencil {
  std::vector<std::size_t> ids;
  int order = 0;
  int effective_rank = 0;
  int terms = 0;
  std::vector<double> weights;

  std::size_t size() const { return ids.size(); }

  double apply(int term, std::span<const double> values, std::size_t center) const {
    const double* w = weights.data() + static_cast<std::size_t>(term) * ids.size();
    const double u0 = values[center];
    double s = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) s += w[i] * (values[ids[i]] - u0);
    return s;
  }
};

/// Dynamic stencil growth with reusable workspace. Not thread-safe; use one
/// builder per thread.
template <int Dim>
class StencilBuilder {
 public:
  explicit StencilBuilder(StencilOptions opt = {}) : opt_(opt) {}

  const StencilOptions& options() const { return opt_; }

  /// Tries exactly `order`: start with n_start candidates, add one at a time
  /// until the effective rank reaches the unknown count. Returns false when
  /// the candidates run out first.
  bool fit(std::span<const Vec<Dim>> positions, std::size_t center, std::span<const Neighbor> candidates, int order,
           Stencil& out) {
    const int n = taylor_terms(Dim, order);
    const std::size_t avail = std::min(candidates.size(), opt_.max_members);
    if (avail == 0) return false;
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(n_start_for(opt_, Dim, order)), avail);
    if (count == 0) count = 1;
    while (true) {
      double scale = 0.0;
      for (std::size_t i = 0; i < count; ++i) scale = std::max(scale, candidates[i].distance);
      if (!(scale > 0.0)) throw DegenerateStencilError("stencil: all neighbour offsets vanish");
      const int m = static_cast<int>(count);
      a_.assign(static_cast<std::size_t>(m) * n, 0.0);
      for (int i = 0; i < m; ++i) {
        Vec<Dim> h;
        const auto& p = positions[candidates[static_cast<std::size_t>(i)].id];
        for (int d = 0; d < Dim; ++d) h[d] = (p[d] - positions[center][d]) / scale;
        taylor_row<Dim>(h, order, row_);
        for (int j = 0; j < n; ++j) a_[static_cast<std::size_t>(j) * m + i] = row_[static_cast<std::size_t>(j)];
      }
      qr_.factorize(m, n, a_);
      if (qr_.r(0, 0) == 0.0) throw DegenerateStencilError("stencil: all neighbour offsets vanish");
      const int rank = qr_.effective_rank(opt_.epsilon);
      if (rank >= n) {
        out.ids.resize(count);
        for (std::size_t i = 0; i < count; ++i) out.ids[i] = candidates[i].id;
        out.order = order;
        out.effective_rank = rank;
        out.terms = n;
        out.weights.assign(static_cast<std::size_t>(n) * count, 0.0);
        w_.resize(count);
        for (int c = 0; c < n; ++c) {
          qr_.pseudoinverse_row(c, rank, w_);
          const double unscale = term_degree(Dim, c) == 1 ? 1.0 / scale : 1.0 / (scale * scale);
          for (std::size_t i = 0; i < count; ++i) out.weights[static_cast<std::size_t>(c) * count + i] = w_[i] * unscale;
        }
        return true;
      }
      if (count == avail) {
        last_rank_ = rank;
        return false;
      }
      ++count;
    }
  }

  /// Effective rank of the last failed attempt (diagnostics).
  int last_rank() const { return last_rank_; }

 private:
  StencilOptions opt_;
  PivotedQR qr_;
  std::vector<double> a_;
  std::array<double, 9> row_{};
  std::vector<double> w_;
  int last_rank_ = 0;
};

/// Dynamic stencil selection with order fallback: order 2 is attempted first
/// when requested; on exhaustion a first-order fit is tried.
template <int Dim>
Stencil select_stencil(std::span<const Vec<Dim>> positions, std::size_t center, std::span<const Neighbor> candidates,
                       int order, const StencilOptions& opt = {}) {
  StencilBuilder<Dim> builder(opt);
  Stencil s;
  for (int o = order; o >= 1; --o)
    if (builder.fit(positions, center, candidates, o, s)) return s;
  throw InsufficientNeighborhoodError("select_stencil: no first-order fit attainable");
}

struct DerivativeEstimate {
  double first = 0.0;
  std::optional<double> second;
  int order = 0;
};

/// One-sided derivative of `values` at `center` along `axis` from the
/// distance-sorted neighbour list.
template <int Dim>
DerivativeEstimate derivative(std::span<const Vec<Dim>> positions, std::span<const double> values, std::size_t center,
                              std::span<const Neighbor> sorted_neighbors, int axis, Side side, int order,
                              const StencilOptions& opt = {}) {
  const auto one_sided =
      one_sided_neighbors<Dim>(positions, center, sorted_neighbors, axis, side, opt.min_offset_ratio);
  const auto balanced = balance_interleave<Dim>(positions, center, one_sided, axis);
  const Stencil s = select_stencil<Dim>(positions, center, balanced, order, opt);
  DerivativeEstimate out;
  out.order = s.order;
  out.first = s.apply(axis, values, center);
  if (s.order == 2) out.second = s.apply(second_derivative_term(Dim, axis), values, center);
  return out;
}

}  // namespace lpm
