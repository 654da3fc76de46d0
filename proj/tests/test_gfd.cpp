#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "lpm/gfd/qrcp.hpp"
#include "lpm/gfd/stencil.hpp"
#include "lpm/gfd/taylor.hpp"
#include "lpm/neighbor/neighbor.hpp"

using namespace lpm;

namespace {

std::vector<Neighbor> all_neighbors(std::span<const Vec<2>> pts, std::size_t center) {
  return brute_force_radius<2>(pts, pts[center], 1e300, center);
}

std::vector<Neighbor> in_order(std::span<const Vec<2>> pts, std::size_t center, std::vector<std::size_t> ids) {
  std::vector<Neighbor> out;
  for (auto id : ids) out.push_back({id, distance<2>(pts[id], pts[center])});
  return out;
}

Eigen::MatrixXd to_eigen(const TaylorSystem& s) {
  Eigen::MatrixXd m(s.rows, s.cols);
  for (int i = 0; i < s.rows; ++i)
    for (int j = 0; j < s.cols; ++j) m(i, j) = s.at(i, j);
  return m;
}

int svd_rank(const Eigen::MatrixXd& m, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel * s(0)) ++r;
  return r;
}

}  // namespace

TEST(OneSided, LeftSelectionKeepsDistanceOrder) {
  std::vector<Vec<1>> pts{{0.0}, {-1.0}, {-0.5}, {1.0}};
  const auto nb = brute_force_radius<1>(pts, pts[0], 10.0, 0);
  const auto left = one_sided_neighbors<1>(pts, 0, nb, 0, Side::left);
  ASSERT_EQ(left.size(), 2u);
  EXPECT_EQ(left[0].id, 2u);
  EXPECT_EQ(left[1].id, 1u);
}

TEST(OneSided, AllRightMeansEmptyLeft) {
  std::vector<Vec<1>> pts{{0.0}, {0.5}, {1.0}};
  const auto nb = brute_force_radius<1>(pts, pts[0], 10.0, 0);
  EXPECT_TRUE(one_sided_neighbors<1>(pts, 0, nb, 0, Side::left).empty());
}

TEST(OneSided, MatchesFilterOracleAndExcludesHyperplane) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec<2>> pts(200);
  for (auto& p : pts) p = {u(rng), u(rng)};
  pts[5] = {pts[0][0], 0.3};  // exactly on the hyperplane
  const auto nb = all_neighbors(pts, 0);
  for (int axis = 0; axis < 2; ++axis) {
    const auto left = one_sided_neighbors<2>(pts, 0, nb, axis, Side::left);
    const auto right = one_sided_neighbors<2>(pts, 0, nb, axis, Side::right);
    std::vector<Neighbor> l_ref, r_ref;
    for (const auto& n : nb) {
      if (pts[n.id][axis] < pts[0][axis]) l_ref.push_back(n);
      if (pts[n.id][axis] > pts[0][axis]) r_ref.push_back(n);
    }
    EXPECT_EQ(left, l_ref);
    EXPECT_EQ(right, r_ref);
  }
  const auto left_x = one_sided_neighbors<2>(pts, 0, nb, 0, Side::left);
  const auto right_x = one_sided_neighbors<2>(pts, 0, nb, 0, Side::right);
  auto has5 = [](const std::vector<Neighbor>& v) {
    return std::any_of(v.begin(), v.end(), [](const Neighbor& n) { return n.id == 5; });
  };
  EXPECT_FALSE(has5(left_x));
  EXPECT_FALSE(has5(right_x));
}

TEST(OneSided, OffsetRatioDropsGrazingNeighbours) {
  std::vector<Vec<2>> pts{{0, 0}, {1.0, 1e-20}, {1.0, 1.0}, {0.05, -1.0}};
  const auto nb = all_neighbors(pts, 0);
  const auto strict = one_sided_neighbors<2>(pts, 0, nb, 1, Side::right);
  ASSERT_EQ(strict.size(), 2u);
  const auto guarded = one_sided_neighbors<2>(pts, 0, nb, 1, Side::right, 0.3);
  ASSERT_EQ(guarded.size(), 1u);
  EXPECT_EQ(guarded[0].id, 2u);
}

// Worked example: u/l halves interleave starting from the nearest.
TEST(Balance, WorkedExample) {
  std::vector<Vec<2>> pts(10);
  pts[0] = {0, 0};
  const bool upper[10] = {false, true, true, false, true, true, true, false, true, false};
  for (int i = 1; i <= 9; ++i) pts[i] = {0.1 * i, upper[i] ? 0.01 * i : -0.01 * i};
  std::vector<Neighbor> sorted;
  for (std::size_t i = 1; i <= 9; ++i) sorted.push_back({i, static_cast<double>(i)});
  const auto out = balance_interleave<2>(pts, 0, sorted, 0);
  std::vector<std::size_t> ids;
  for (const auto& n : out) ids.push_back(n.id);
  EXPECT_EQ(ids, (std::vector<std::size_t>{1, 3, 2, 7, 4, 9, 5, 6, 8}));
}

TEST(Balance, SingleHalfUnchangedAndAlternatingUnchanged) {
  std::vector<Vec<2>> pts{{0, 0}, {0.1, 0.1}, {0.2, 0.1}, {0.3, 0.2}};
  std::vector<Neighbor> sorted{{1, 1}, {2, 2}, {3, 3}};
  EXPECT_EQ(balance_interleave<2>(pts, 0, sorted, 0), sorted);
  std::vector<Vec<2>> alt{{0, 0}, {0.1, 0.1}, {0.2, -0.1}, {0.3, 0.2}, {0.4, -0.2}};
  std::vector<Neighbor> s2{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  EXPECT_EQ(balance_interleave<2>(alt, 0, s2, 0), s2);
}

TEST(Balance, ThreeDimensionalQuadrantCycle) {
  // Axis x: quadrants over (y, z) in order (+,+), (-,+), (-,-), (+,-).
  std::vector<Vec<3>> pts{{0, 0, 0}, {0.1, 1, 1}, {0.2, 1, 1}, {0.3, -1, 1}, {0.4, -1, -1}, {0.5, 1, -1}};
  std::vector<Neighbor> sorted{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
  std::vector<std::size_t> ids;
  for (const auto& n : balance_interleave<3>(pts, 0, sorted, 0)) ids.push_back(n.id);
  EXPECT_EQ(ids, (std::vector<std::size_t>{1, 3, 4, 5, 2}));
}

TEST(Taylor, RowStructure) {
  std::vector<Vec<1>> p1{{0.0}, {0.1}};
  std::vector<double> v1{1.0, 1.05};
  std::vector<std::size_t> ids{1};
  const auto s1 = assemble_taylor<1>(p1, 0, ids, v1, 1);
  EXPECT_DOUBLE_EQ(s1.at(0, 0), 0.1);
  EXPECT_NEAR(s1.b[0], 0.05, 1e-15);

  std::vector<Vec<2>> p2{{0, 0}, {1, 2}};
  const auto s2 = assemble_taylor<2>(p2, 0, ids, {}, 2);
  ASSERT_EQ(s2.cols, 5);
  const double row[5] = {1, 2, 0.5, 2, 2};
  for (int j = 0; j < 5; ++j) EXPECT_EQ(s2.at(0, j), row[j]);

  std::vector<Vec<3>> p3{{0, 0, 0}, {1, 2, 3}};
  EXPECT_EQ(assemble_taylor<3>(p3, 0, ids, {}, 2).cols, 9);
  EXPECT_EQ(taylor_terms(1, 2), 2);
  EXPECT_EQ(taylor_terms(2, 1), 2);
  EXPECT_EQ(taylor_terms(3, 1), 3);
}

TEST(Qrcp, ScalarSystem) {
  TaylorSystem s;
  s.rows = s.cols = 1;
  s.a = {0.1};
  s.b = {0.05};
  const auto r = solve_qrcp(s, 1e-3);
  EXPECT_EQ(r.effective_rank, 1);
  EXPECT_NEAR(r.theta[0], 0.5, 1e-15);
}

TEST(Qrcp, ZeroOffsetsAreDegenerate) {
  TaylorSystem s;
  s.rows = 2;
  s.cols = 2;
  s.a.assign(4, 0.0);
  s.b.assign(2, 1.0);
  EXPECT_THROW(solve_qrcp(s, 1e-3), DegenerateStencilError);
}

TEST(Qrcp, CollinearNeighboursLoseRankLikeSvd) {
  std::vector<Vec<2>> pts{{0, 0}};
  for (int i = 1; i <= 5; ++i) pts.push_back({0.1 * i, 0.05 * i});
  std::vector<std::size_t> ids{1, 2, 3, 4, 5};
  const auto sys = assemble_taylor<2>(pts, 0, ids, std::vector<double>(6, 0.0), 2, 0.5);
  const auto r = solve_qrcp(sys, 1e-3);
  EXPECT_LT(r.effective_rank, 5);
  EXPECT_EQ(r.effective_rank, svd_rank(to_eigen(sys), 1e-10));
}

TEST(Qrcp, ExactQuadraticReproduction) {
  // U = 3 + 2x + x^2 - xy around the origin.
  auto f = [](const Vec<2>& p) { return 3 + 2 * p[0] + p[0] * p[0] - p[0] * p[1]; };
  std::vector<Vec<2>> pts{{0, 0}, {0.3, 0.1}, {-0.2, 0.25}, {0.1, -0.3}, {-0.25, -0.15}, {0.35, 0.3}, {-0.1, 0.4}};
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(f(p));
  std::vector<std::size_t> ids{1, 2, 3, 4, 5, 6};
  const auto r = solve_qrcp(assemble_taylor<2>(pts, 0, ids, v, 2), 1e-3);
  ASSERT_EQ(r.effective_rank, 5);
  EXPECT_NEAR(r.theta[0], 2.0, 1e-9);
  EXPECT_NEAR(r.theta[1], 0.0, 1e-9);
  EXPECT_NEAR(r.theta[2], 2.0, 1e-9);
  EXPECT_NEAR(r.theta[3], 0.0, 1e-9);
  EXPECT_NEAR(r.theta[4], -1.0, 1e-9);
}

TEST(Qrcp, FullRankSolutionMatchesSvdLeastSquares) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec<2>> pts(12);
    std::vector<double> v(12);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pts[i] = {u(rng), u(rng)};
      v[i] = u(rng);
    }
    std::vector<std::size_t> ids;
    for (std::size_t i = 1; i < pts.size(); ++i) ids.push_back(i);
    const auto sys = assemble_taylor<2>(pts, 0, ids, v, 2);
    const auto r = solve_qrcp(sys, 1e-8);
    const auto m = to_eigen(sys);
    ASSERT_EQ(r.effective_rank, svd_rank(m, 1e-8));
    Eigen::VectorXd b(sys.rows);
    for (int i = 0; i < sys.rows; ++i) b(i) = sys.b[static_cast<std::size_t>(i)];
    const Eigen::VectorXd x = m.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
    for (int j = 0; j < sys.cols; ++j) EXPECT_NEAR(r.theta[static_cast<std::size_t>(j)], x(j), 1e-8 * (1 + x.norm()));
  }
}

// The mathematical rank (absolute threshold) never drops when a row is added.
// The relative test R_kk < eps R_11 can: a long new row raises R_11.
TEST(Qrcp, RankMonotonicityUnderRowAddition) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec<2>> pts{{0, 0}};
    for (int i = 0; i < 9; ++i) pts.push_back({u(rng), u(rng)});
    std::vector<std::size_t> ids;
    int prev = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      ids.push_back(i);
      const int r = svd_rank(to_eigen(assemble_taylor<2>(pts, 0, ids, {}, 2)), 1e-12);
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
  // Rows (1, 0), (0, 0.01): rank 2 at eps 1e-3. A row (100, 0) lifts R_11 to
  // ~100 and the relative test reports rank 1.
  PivotedQR qr;
  qr.factorize(2, 2, std::vector<double>{1.0, 0.0, 0.0, 0.01});
  EXPECT_EQ(qr.effective_rank(1e-3), 2);
  qr.factorize(3, 2, std::vector<double>{1.0, 0.0, 100.0, 0.0, 0.01, 0.0});
  EXPECT_EQ(qr.effective_rank(1e-3), 1);
}

TEST(Qrcp, TranslationInvarianceOfFieldValues) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec<2>> pts(9);
  std::vector<double> v(9), w(9);
  for (std::size_t i = 0; i < 9; ++i) {
    pts[i] = {u(rng), u(rng)};
    v[i] = u(rng);
    w[i] = v[i] + 123.0;
  }
  std::vector<std::size_t> ids{1, 2, 3, 4, 5, 6, 7, 8};
  const auto a = solve_qrcp(assemble_taylor<2>(pts, 0, ids, v, 2), 1e-3);
  const auto b = solve_qrcp(assemble_taylor<2>(pts, 0, ids, w, 2), 1e-3);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(a.theta[static_cast<std::size_t>(j)], b.theta[static_cast<std::size_t>(j)], 1e-12);
}

TEST(Select, FullRankFirstFiveGivesFive) {
  std::vector<Vec<2>> pts{{0, 0}, {0.1, 0.02}, {0.12, -0.05}, {0.2, 0.1}, {0.22, -0.12}, {0.3, 0.01},
                          {0.31, 0.2}, {0.33, -0.22}, {0.4, 0.05}, {0.41, -0.08}};
  const auto cand = in_order(pts, 0, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto s = select_stencil<2>(pts, 0, cand, 2);
  EXPECT_EQ(s.order, 2);
  EXPECT_EQ(s.size(), 5u);
  EXPECT_GE(s.effective_rank, 5);
}

TEST(Select, RankDeficientPrefixGrowsToSeven) {
  // Six candidates on the parabola k = h^2 (k - h^2 is a null combination of
  // the columns), the seventh off it.
  std::vector<Vec<2>> pts{{0, 0}};
  for (double h : {0.1, -0.15, 0.2, -0.25, 0.3, -0.35}) pts.push_back({h, h * h});
  pts.push_back({0.05, -0.3});
  const auto cand = in_order(pts, 0, {1, 2, 3, 4, 5, 6, 7});
  const auto s = select_stencil<2>(pts, 0, cand, 2);
  EXPECT_EQ(s.order, 2);
  EXPECT_EQ(s.size(), 7u);
}

TEST(Select, CollinearWithCentreFallsBackThenFails) {
  std::vector<Vec<2>> pts{{0, 0}, {0.1, 0.1}, {0.2, 0.2}};
  const auto cand = in_order(pts, 0, {1, 2});
  EXPECT_THROW(select_stencil<2>(pts, 0, cand, 2), InsufficientNeighborhoodError);
  std::vector<Vec<2>> ok{{0, 0}, {0.1, 0.1}, {0.2, -0.1}};
  const auto s = select_stencil<2>(ok, 0, in_order(ok, 0, {1, 2}), 2);
  EXPECT_EQ(s.order, 1);
  EXPECT_EQ(s.effective_rank, 2);
}

TEST(Derivative, LinearAndQuadratic1d) {
  std::vector<Vec<1>> pts{{0.5}, {0.6}, {0.7}, {0.4}};
  std::vector<double> lin, quad;
  for (const auto& p : pts) {
    lin.push_back(4 * p[0]);
    quad.push_back(p[0] * p[0]);
  }
  const auto nb = brute_force_radius<1>(pts, pts[0], 1.0, 0);
  const auto d1 = derivative<1>(pts, lin, 0, nb, 0, Side::right, 1);
  EXPECT_NEAR(d1.first, 4.0, 1e-12);
  const auto d2 = derivative<1>(pts, quad, 0, nb, 0, Side::right, 2);
  ASSERT_TRUE(d2.second.has_value());
  EXPECT_NEAR(d2.first, 1.0, 1e-12);
  EXPECT_NEAR(*d2.second, 2.0, 1e-10);
}

TEST(Derivative, PolynomialExactnessOnRandomClouds) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double c[6];
    for (auto& x : c) x = u(rng);
    auto f = [&](const Vec<2>& p) {
      return c[0] + c[1] * p[0] + c[2] * p[1] + c[3] * p[0] * p[0] + c[4] * p[1] * p[1] + c[5] * p[0] * p[1];
    };
    std::vector<Vec<2>> pts{{0.0, 0.0}};
    for (int i = 0; i < 40; ++i) pts.push_back({0.2 * u(rng), 0.2 * u(rng)});
    std::vector<double> v;
    for (const auto& p : pts) v.push_back(f(p));
    const auto nb = all_neighbors(pts, 0);
    for (int axis = 0; axis < 2; ++axis)
      for (Side side : {Side::left, Side::right}) {
        const auto d = derivative<2>(pts, v, 0, nb, axis, side, 2);
        ASSERT_EQ(d.order, 2);
        EXPECT_NEAR(d.first, c[1 + axis], 1e-9 * (1 + std::abs(c[1 + axis])));
        EXPECT_NEAR(*d.second, 2 * c[3 + axis], 1e-9 * (1 + std::abs(c[3 + axis])));
      }
  }
}

TEST(Derivative, SecondOrderConvergenceOnSine1d) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  double prev = 0.0;
  std::vector<double> slopes;
  for (double h : {0.04, 0.02, 0.01, 0.005}) {
    std::vector<Vec<1>> pts{{0.3}};
    for (int i = 1; i <= 6; ++i) pts.push_back({0.3 + h * (i + jitter(rng))});
    std::vector<double> v;
    for (const auto& p : pts) v.push_back(std::sin(p[0]));
    const auto nb = brute_force_radius<1>(pts, pts[0], 1.0, 0);
    const double err = std::abs(derivative<1>(pts, v, 0, nb, 0, Side::right, 2).first - std::cos(0.3));
    if (prev > 0.0) slopes.push_back(std::log2(prev / err));
    prev = err;
  }
  for (double s : slopes) EXPECT_GT(s, 1.5);
}
