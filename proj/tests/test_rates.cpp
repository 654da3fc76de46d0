#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpm/solver/rates.hpp"
#include "lpm/solver/time_step.hpp"

using namespace lpm;

namespace {

AxisDerivatives symmetric(double ux, double px) {
  AxisDerivatives d;
  d.u_xl = d.u_xr = ux;
  d.p_xl = d.p_xr = px;
  return d;
}

}  // namespace

TEST(FirstOrder, UniformStateHasZeroRates) {
  EXPECT_EQ(rates_first_order(AxisDerivatives{}, 3.0, 0.7), StateRates{});
}

TEST(FirstOrder, SymmetricCompression) {
  const double K = 4.0, V0 = 0.5, a = 1.5;
  const auto r = rates_first_order(symmetric(a, 0.0), K, V0);
  EXPECT_DOUBLE_EQ(r.v_t, V0 * a);
  EXPECT_DOUBLE_EQ(r.u_t, 0.0);
  EXPECT_DOUBLE_EQ(r.p_t, -V0 * K * a);
}

// With P_x = -sqrt(K) u_x and u_x = 1 the printed rates give u_t = +V0 sqrt(K),
// P_t = -V0 K; the negated gradient pair (u_x = -1) gives the opposite signs.
TEST(FirstOrder, SimpleWaveBothSigns) {
  const double K = 9.0, V0 = 2.0, sk = 3.0;
  const auto a = rates_first_order(symmetric(1.0, -sk), K, V0);
  EXPECT_DOUBLE_EQ(a.u_t, V0 * sk);
  EXPECT_DOUBLE_EQ(a.p_t, -V0 * K);
  const auto b = rates_first_order(symmetric(-1.0, sk), K, V0);
  EXPECT_DOUBLE_EQ(b.u_t, -V0 * sk);
  EXPECT_DOUBLE_EQ(b.p_t, V0 * K);
  // Simple wave: P_t = sqrt(K) u_t and V_t = -P_t / K along the wave family.
  EXPECT_DOUBLE_EQ(a.p_t, -sk * a.u_t);
  EXPECT_DOUBLE_EQ(a.v_t, -a.p_t / K);
}

// Upwinding: right-running content (P_x = +sqrt(K) u_x) reads only left-side
// derivatives, left-running content only right-side ones.
TEST(FirstOrder, UpwindSideSelection) {
  const double K = 4.0, V0 = 1.0, sk = 2.0;
  AxisDerivatives right_running;
  right_running.u_xl = 1.0;
  right_running.p_xl = sk;
  const auto r = rates_first_order(right_running, K, V0);
  AxisDerivatives both = right_running;
  both.u_xr = 1.0;
  both.p_xr = sk;
  const auto full = rates_first_order(both, K, V0);
  // Right-side right-running data is ignored by the upwind split.
  EXPECT_NEAR(full.u_t, r.u_t, 1e-15);
  EXPECT_NEAR(full.p_t, r.p_t, 1e-15);
}

// Oracle: characteristic decomposition with upwinded characteristic gradients.
TEST(FirstOrder, MatchesCharacteristicUpwindOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 10.0);
  for (int i = 0; i < 500; ++i) {
    AxisDerivatives d;
    d.u_xl = u(rng);
    d.u_xr = u(rng);
    d.p_xl = u(rng);
    d.p_xr = u(rng);
    const double K = pos(rng), V0 = pos(rng), sk = std::sqrt(K);
    // w2 = -(u/(2 sk)) - P/(2K) moves at +V0 sk, w3 = u/(2 sk) - P/(2K) at -V0 sk.
    const double w2x = -d.u_xl / (2 * sk) - d.p_xl / (2 * K);
    const double w3x = d.u_xr / (2 * sk) - d.p_xr / (2 * K);
    const double w2t = -V0 * sk * w2x, w3t = V0 * sk * w3x;
    // u = sk (w3 - w2), P = -K (w2 + w3), V_t = -P_t / K.
    const double ut = sk * (w3t - w2t), pt = -K * (w2t + w3t);
    const auto r = rates_first_order(d, K, V0);
    EXPECT_NEAR(r.u_t, ut, 1e-12 * (1 + std::abs(ut)));
    EXPECT_NEAR(r.p_t, pt, 1e-12 * (1 + std::abs(pt)));
    EXPECT_NEAR(r.v_t, -pt / K, 1e-12 * (1 + std::abs(pt / K)));
  }
}

TEST(BeamWarming, ZeroSecondDerivativesReduceToFirstOrder) {
  const auto d = symmetric(0.3, -0.7);
  EXPECT_EQ(rates_beam_warming(d, 2.0, 1.5, 0.01), rates_first_order(d, 2.0, 1.5));
  EXPECT_EQ(rates_beam_warming(AxisDerivatives{}, 2.0, 1.5, 0.01), StateRates{});
}

TEST(BeamWarming, QuadraticVelocityCorrection) {
  AxisDerivatives d;
  d.u_xxl = d.u_xxr = 2.0;
  const double K = 3.0, V0 = 0.5, dt = 0.1;
  const auto r = rates_beam_warming(d, K, V0, dt);
  EXPECT_DOUBLE_EQ(r.v_t, 0.0);
  EXPECT_NEAR(r.u_t, dt / 4 * V0 * V0 * K * 4, 1e-15);
}

// (dt/2) A^2 U_xx split by family equals the printed correction when left and
// right second derivatives agree.
TEST(BeamWarming, CorrectionMatchesMatrixFormWhenSidesAgree) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    AxisDerivatives d;
    d.u_xxl = d.u_xxr = u(rng);
    d.p_xxl = d.p_xxr = u(rng);
    const double K = pos(rng), V0 = pos(rng), dt = 0.01 * pos(rng);
    const auto r = rates_beam_warming(d, K, V0, dt);
    // A^2 = V0^2 [[0, 0, -1], [0, K, 0], [0, 0, K]] on (V, u, P).
    const double v2 = V0 * V0;
    EXPECT_NEAR(r.v_t, 0.5 * dt * (-v2 * d.p_xxl), 1e-12);
    EXPECT_NEAR(r.u_t, 0.5 * dt * (v2 * K * d.u_xxl), 1e-12);
    EXPECT_NEAR(r.p_t, 0.5 * dt * (v2 * K * d.p_xxl), 1e-12);
  }
}

TEST(Theta, SmoothDataIsOne) {
  EXPECT_DOUBLE_EQ(smoothness_theta(symmetric(0.4, -2.0), 1e-12), 1.0);
}

TEST(Theta, ExtremumIsNonPositive) {
  AxisDerivatives d = symmetric(1.0, 1.0);
  d.u_xr = -1.0;
  EXPECT_LE(smoothness_theta(d, 1e-12), 0.0);
  EXPECT_DOUBLE_EQ(smoothness_ratio(1.0, -1.0, 1e-12, ThetaForm::symmetric), -1.0);
}

TEST(Theta, TinyDenominatorGivesSentinelAndZeroPhi) {
  AxisDerivatives d = symmetric(1.0, 1.0);
  d.u_xr = 1e-15;
  EXPECT_TRUE(std::isinf(smoothness_theta(d, 1e-12)));
  EXPECT_EQ(limiter_phi(smoothness_theta(d, 1e-12)), 0.0);
  d = symmetric(1.0, 1.0);
  d.p_xl = 0.0;
  EXPECT_EQ(limiter_phi(smoothness_theta(d, 1e-12)), 0.0);
}

TEST(Theta, OneSidedFormIsPlainRatio) {
  AxisDerivatives d = symmetric(1.0, 1.0);
  d.u_xl = 3.0;
  EXPECT_DOUBLE_EQ(smoothness_theta(d, 1e-12, ThetaForm::one_sided), 1.0);
  d.p_xl = 0.5;
  EXPECT_DOUBLE_EQ(smoothness_theta(d, 1e-12, ThetaForm::one_sided), 0.5);
}

TEST(Phi, VanLeerValues) {
  EXPECT_DOUBLE_EQ(limiter_phi(1.0), 1.0);
  EXPECT_EQ(limiter_phi(-0.5), 0.0);
  EXPECT_DOUBLE_EQ(limiter_phi(3.0), 1.5);
  EXPECT_EQ(limiter_phi(0.0), 0.0);
  EXPECT_EQ(limiter_phi(kThetaSentinel), 0.0);
  EXPECT_EQ(limiter_phi(std::nan("")), 0.0);
}

TEST(Phi, RangeAndMonotonicity) {
  double prev = 0.0;
  for (double t = 0.0; t < 1e6; t = t * 1.1 + 0.01) {
    const double p = limiter_phi(t);
    EXPECT_GE(p, prev);
    EXPECT_LT(p, 2.0);
    prev = p;
  }
}

TEST(Blend, AffineInPhi) {
  const StateRates low{0.0, 1.0, -2.0}, high{2.0, 3.0, 2.0};
  EXPECT_EQ(limited_rates(low, high, 0.0), low);
  EXPECT_EQ(limited_rates(low, high, 1.0), high);
  const auto mid = limited_rates(low, high, 0.5);
  EXPECT_DOUBLE_EQ(mid.v_t, 1.0);
  EXPECT_DOUBLE_EQ(mid.u_t, 2.0);
  EXPECT_DOUBLE_EQ(mid.p_t, 0.0);
}

TEST(TimeStep, StepLimitExamples) {
  EXPECT_DOUBLE_EQ(step_limit(0.1, 10.0, 0.0, Scheme::first, 1.0), 0.01);
  EXPECT_DOUBLE_EQ(step_limit(0.1, 10.0, 0.0, Scheme::beam_warming, 1.0), 0.02);
  EXPECT_DOUBLE_EQ(step_limit(0.1, 10.0, 20.0, Scheme::beam_warming, 1.0), 0.01);
  // The limited scheme contains the first-order rates and obeys both limits.
  EXPECT_DOUBLE_EQ(step_limit(0.1, 10.0, 0.0, Scheme::limited, 1.0), 0.01);
  // Split steps run each axis with d times the flux matrix.
  EXPECT_DOUBLE_EQ(step_limit(0.1, 10.0, 0.0, Scheme::first, 2.0), 0.005);
}

TEST(TimeStep, TwoParticleExample) {
  // c = V sqrt(K) = sqrt(gamma P V) = 10 with gamma 2, P 50, V 1.
  const auto eos = EosModel::polytropic(2.0);
  ParticleSet<1> ps(2);
  ps[0].position = {0.0};
  ps[1].position = {0.1};
  for (auto& p : ps) {
    p.pressure = 50.0;
    p.specific_volume = 1.0;
    p.mass = 1.0;
  }
  EXPECT_NEAR(compute_time_step<1>(ps, eos, 1.0, Scheme::first), 0.01, 1e-15);
  EXPECT_NEAR(compute_time_step<1>(ps, eos, 1.0, Scheme::beam_warming), 0.02, 1e-15);
  ps[0].velocity = {20.0};
  EXPECT_NEAR(compute_time_step<1>(ps, eos, 1.0, Scheme::beam_warming), 0.01, 1e-15);
  EXPECT_NEAR(compute_time_step<1>(ps, eos, 0.5, Scheme::first), 0.005, 1e-15);
}

TEST(TimeStep, ErrorsOnTooFewParticlesAndLostHyperbolicity) {
  const auto eos = EosModel::polytropic(2.0);
  ParticleSet<1> one(1);
  EXPECT_THROW(compute_time_step<1>(one, eos, 1.0, Scheme::first), DomainError);
  ParticleSet<1> ps(2);
  ps[1].position = {0.1};
  ps[0].pressure = ps[1].pressure = 0.0;
  EXPECT_THROW(compute_time_step<1>(ps, eos, 1.0, Scheme::first), HyperbolicityError);
}
