#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "lpm/scenarios/scenarios.hpp"
#include "lpm/verification/gresho.hpp"

using namespace lpm;

namespace {

template <int Dim>
void expect_equal_masses_and_density(const Scenario<Dim>& s, double rho) {
  ASSERT_FALSE(s.particles.empty());
  const double m = s.particles.front().mass;
  for (const auto& p : s.particles) {
    EXPECT_EQ(p.mass, m);
    EXPECT_NEAR(p.specific_volume, 1.0 / rho, 1e-15 / rho);
  }
}

template <int Dim>
const Particle<Dim>& closest_to(const ParticleSet<Dim>& ps, const Vec<Dim>& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ps.size(); ++i)
    if (distance<Dim>(ps[i].position, x) < distance<Dim>(ps[best].position, x)) best = i;
  return ps[best];
}

}  // namespace

TEST(GaussianWave, PolytropicProfileAndMass) {
  const auto s = init_gaussian_1d(480);
  EXPECT_EQ(closest_to<1>(s.particles, {0.0}).position[0], 0.0);
  EXPECT_DOUBLE_EQ(closest_to<1>(s.particles, {0.0}).pressure, 7.0);
  EXPECT_NEAR(gaussian_pulse(1.5), 5.0, 1e-90);
  EXPECT_NEAR(s.particles.front().pressure, 5.0, 1e-90);
  double mass = 0.0;
  for (const auto& p : s.particles) mass += p.mass;
  EXPECT_NEAR(mass, 0.03, 1e-15);
  EXPECT_EQ(s.eos.kind, EosKind::polytropic);
  EXPECT_DOUBLE_EQ(s.eos.gamma, 5.0 / 3.0);
  expect_equal_masses_and_density(s, 0.01);
  for (const auto& p : s.particles) EXPECT_EQ(p.velocity[0], 0.0);
  EXPECT_THROW(init_gaussian_1d(15), DomainError);
}

TEST(GaussianWave, StiffenedProfileAndSoundSpeed) {
  const auto s = init_gaussian_1d_stiffened(480);
  const auto& centre = closest_to<1>(s.particles, {0.0});
  EXPECT_DOUBLE_EQ(centre.pressure, 7.0);
  EXPECT_NEAR(sound_speed(s.eos, centre.pressure, centre.specific_volume), std::sqrt(6.0 * 7007.0), 1e-10);
  EXPECT_NEAR(std::sqrt(6.0 * 7007.0), 205.0, 0.1);
  expect_equal_masses_and_density(s, 1.0);
}

TEST(GaussianDisk, GeometryAndPulse) {
  const auto s = init_gaussian_disk_2d(2000);
  double pmax = -1.0;
  Vec<2> at{};
  for (const auto& p : s.particles) {
    EXPECT_LE(norm<2>(p.position), 1.0 + 1e-12);
    if (p.pressure > pmax) {
      pmax = p.pressure;
      at = p.position;
    }
    EXPECT_EQ(p.velocity, (Vec<2>{0.0, 0.0}));
  }
  EXPECT_EQ(norm<2>(at), 0.0);
  EXPECT_DOUBLE_EQ(pmax, 7.0);
  EXPECT_EQ(s.boundary.kind, BoundaryKind::free_surface);
  expect_equal_masses_and_density(s, 1.0);
  EXPECT_NEAR(static_cast<double>(s.particles.size()), 2000.0, 100.0);
}

TEST(GaussianDisk, HexRowsUniformlySpaced) {
  const auto s = init_gaussian_disk_2d(1000);
  std::map<long, std::vector<double>> rows;
  for (const auto& p : s.particles) rows[std::lround(p.position[1] / s.spacing * 1e6)].push_back(p.position[0]);
  EXPECT_GT(rows.size(), 10u);
  for (auto& [key, xs] : rows) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_NEAR(xs[i] - xs[i - 1], s.spacing, 1e-12);
  }
}

TEST(GaussianDisk, EndTimeCoversRequestedReflections) {
  DiskParams d;
  d.reflections = 3.0;
  const auto s = init_gaussian_disk_2d(500, d);
  const double c = sound_speed(s.eos, 5.0, 1.0);
  EXPECT_NEAR(s.end_time * c, 6.0, 1e-12);
}

TEST(Gresho, ExactProfileExamples) {
  EXPECT_EQ(gresho_exact(0.0), (std::pair<double, double>{0.0, 5.0}));
  EXPECT_DOUBLE_EQ(gresho_exact(0.2).first, 1.0);
  EXPECT_DOUBLE_EQ(gresho_exact(0.2).second, 5.5);
  EXPECT_DOUBLE_EQ(gresho_exact(0.45).first, 0.0);
  EXPECT_DOUBLE_EQ(gresho_exact(0.45).second, 3.0 + 4.0 * std::log(2.0));
}

TEST(Gresho, ProfileContinuousAtBranchPoints) {
  for (double r : {0.2, 0.4}) {
    const auto below = gresho_exact(std::nextafter(r, 0.0));
    const auto above = gresho_exact(std::nextafter(r, 1.0));
    EXPECT_NEAR(below.first, above.first, 1e-12);
    EXPECT_NEAR(below.second, above.second, 1e-12);
  }
  // Middle branch evaluated at both ends equals the neighbouring branches.
  const double lo = 0.2, hi = 0.4;
  const double mid_lo = 9.0 - 4.0 * std::log(0.2) + 12.5 * lo * lo - 20.0 * lo + 4.0 * std::log(lo);
  const double mid_hi = 9.0 - 4.0 * std::log(0.2) + 12.5 * hi * hi - 20.0 * hi + 4.0 * std::log(hi);
  EXPECT_NEAR(mid_lo, 5.5, 1e-12);
  EXPECT_NEAR(mid_hi, 3.0 + 4.0 * std::log(2.0), 1e-12);
}

// dp/dr = u_phi^2 / r with rho = 1, by central differences.
TEST(Gresho, ProfileInRadialEquilibrium) {
  for (double r = 0.01; r < 0.5; r += 0.0137) {
    const double h = 1e-6;
    const double dp = (gresho_exact(r + h).second - gresho_exact(r - h).second) / (2 * h);
    const double u = gresho_exact(r).first;
    EXPECT_NEAR(dp, u * u / r, 1e-5) << "r = " << r;
  }
}

TEST(Gresho, InitialFieldAndFrozenBand) {
  const auto s = init_gresho(4000);
  const auto& at02 = closest_to<2>(s.particles, {0.2, 0.0});
  EXPECT_NEAR(norm<2>(at02.velocity), gresho_exact(norm<2>(at02.position)).first, 1e-14);
  EXPECT_NEAR(norm<2>(at02.velocity), 1.0, 5.0 * s.spacing);
  const auto& at045 = closest_to<2>(s.particles, {0.45, 0.0});
  EXPECT_EQ(norm<2>(at045.velocity), 0.0);
  EXPECT_DOUBLE_EQ(at045.pressure, 3.0 + 4.0 * std::log(2.0));
  std::size_t frozen = 0;
  for (const auto& p : s.particles) {
    EXPECT_LE(std::abs(p.position[0]), 0.5 + 1e-9);
    EXPECT_LE(std::abs(p.position[1]), 0.5 + 1e-9);
    const bool rim = std::max(std::abs(p.position[0]), std::abs(p.position[1])) > 0.5 - 3.0 * s.spacing;
    EXPECT_EQ(p.phase == Phase::frozen, rim);
    frozen += p.phase == Phase::frozen;
  }
  EXPECT_GT(frozen, 0u);
  expect_equal_masses_and_density(s, 1.0);
}

// L = 2 pi int_0^0.4 u_phi r^2 dr = 2 pi (0.002 + 0.0073333...) for rho = 1.
TEST(Gresho, AngularMomentumMatchesRadialQuadrature) {
  const auto s = init_gresho(10000);
  const double exact = 2.0 * std::numbers::pi * (5.0 * std::pow(0.2, 4) / 4.0 + 2.0 * (0.064 - 0.008) / 3.0 -
                                                 5.0 * (0.0256 - 0.0016) / 4.0);
  EXPECT_NEAR(gresho_diagnostics(s.particles, 0.0).angular_momentum, exact, 0.01 * exact);
}

TEST(TwoDisks, SetupProperties) {
  const auto s = init_two_disks(500);
  ASSERT_EQ(s.particles.size() % 2, 0u);
  const std::size_t half = s.particles.size() / 2;
  Vec<2> ca{}, cb{};
  for (std::size_t i = 0; i < half; ++i) {
    const auto& a = s.particles[i];
    const auto& b = s.particles[half + i];
    EXPECT_EQ(a.pressure, 0.0);
    EXPECT_EQ(b.pressure, 0.0);
    EXPECT_DOUBLE_EQ(a.velocity[0] - b.velocity[0], 20.0);
    for (int d = 0; d < 2; ++d) {
      ca[d] += a.position[d] / static_cast<double>(half);
      cb[d] += b.position[d] / static_cast<double>(half);
    }
  }
  EXPECT_NEAR(cb[1] - ca[1], 1.0, 1e-12);
  // The disks do not overlap: gap of about two spacings beyond first contact.
  double closest = 1e9;
  for (std::size_t i = 0; i < half; i += 3)
    for (std::size_t j = half; j < s.particles.size(); j += 3)
      closest = std::min(closest, distance<2>(s.particles[i].position, s.particles[j].position));
  EXPECT_GT(closest, s.spacing);
  expect_equal_masses_and_density(s, 1.0);
  EXPECT_EQ(s.eos.kind, EosKind::stiffened_polytropic);
}

TEST(Sod, StatesAndSpacing) {
  const auto s = init_sod_1d(400);
  EXPECT_EQ(s.particles.size(), 400u);
  double dl = 0.0, dr = 0.0;
  for (std::size_t i = 1; i < s.particles.size(); ++i) {
    const auto& a = s.particles[i - 1];
    const auto& b = s.particles[i];
    if (b.position[0] < 0.5) dl = b.position[0] - a.position[0];
    if (a.position[0] > 0.5) dr = b.position[0] - a.position[0];
    EXPECT_EQ(a.pressure, a.position[0] < 0.5 ? 1.0 : 0.1);
  }
  EXPECT_NEAR(dr / dl, 8.0, 1e-9);
  EXPECT_EQ(s.particles.front().pressure, 1.0);
  EXPECT_EQ(s.particles.back().pressure, 0.1);
  EXPECT_EQ(s.initial_state(Vec<1>{0.49}).rho, 1.0);
  EXPECT_EQ(s.initial_state(Vec<1>{0.51}).rho, 0.125);
  const double m = s.particles.front().mass;
  for (const auto& p : s.particles) {
    EXPECT_EQ(p.mass, m);
    EXPECT_NEAR(p.specific_volume, p.position[0] < 0.5 ? 1.0 : 8.0, 1e-15);
  }
}

TEST(Scenarios, GeneratorsAreDeterministic) {
  const auto a = init_gresho(900), b = init_gresho(900);
  ASSERT_EQ(a.particles.size(), b.particles.size());
  for (std::size_t i = 0; i < a.particles.size(); ++i) {
    EXPECT_EQ(a.particles[i].position, b.particles[i].position);
    EXPECT_EQ(a.particles[i].velocity, b.particles[i].velocity);
  }
  EXPECT_THROW(init_gresho(100), DomainError);
  EXPECT_THROW(init_two_disks(100), DomainError);
  EXPECT_THROW(init_gaussian_disk_2d(50), DomainError);
  EXPECT_THROW(init_sod_1d(50), DomainError);
}
