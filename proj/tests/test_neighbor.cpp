#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lpm/neighbor/bucket_index.hpp"
#include "lpm/neighbor/index.hpp"
#include "lpm/neighbor/tree_index.hpp"

using namespace lpm;

namespace {

template <int Dim>
std::vector<Vec<Dim>> random_points(std::mt19937_64& rng, std::size_t n, bool clustered) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.02);
  std::vector<Vec<Dim>> pts(n);
  Vec<Dim> hub{};
  for (int d = 0; d < Dim; ++d) hub[d] = u(rng);
  for (auto& p : pts)
    for (int d = 0; d < Dim; ++d) p[d] = clustered && u(rng) < 0.7 ? hub[d] + g(rng) : u(rng);
  return pts;
}

}  // namespace

TEST(BucketIndex, SingleParticleOneCell) {
  std::vector<Vec<2>> pts{{0.0, 0.0}};
  BucketIndex<2> b(pts, 1.0);
  std::size_t occupied = 0;
  for (std::size_t c = 0; c < b.cell_count(); ++c)
    if (!b.cell_members(c).empty()) {
      ++occupied;
      EXPECT_EQ(b.cell_members(c)[0], 0u);
    }
  EXPECT_EQ(occupied, 1u);
}

TEST(BucketIndex, CellLargerThanExtentHoldsAll) {
  std::vector<Vec<2>> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  BucketIndex<2> b(pts, 2.0);
  std::size_t max_members = 0;
  for (std::size_t c = 0; c < b.cell_count(); ++c) max_members = std::max(max_members, b.cell_members(c).size());
  EXPECT_EQ(max_members, 4u);
}

TEST(BucketIndex, CountsSumToParticleCount) {
  std::mt19937_64 rng(1);
  const auto pts = random_points<2>(rng, 10000, false);
  BucketIndex<2> b(pts, 0.05);
  std::vector<int> seen(pts.size(), 0);
  for (std::size_t c = 0; c < b.cell_count(); ++c)
    for (auto id : b.cell_members(c)) ++seen[id];
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
}

TEST(BucketIndex, EmptyIsValidAndNonPositiveRadiusRejected) {
  std::vector<Vec<2>> none;
  BucketIndex<2> b(none, 1.0);
  EXPECT_TRUE(b.query_radius({0.0, 0.0}, 1.0).empty());
  EXPECT_THROW(BucketIndex<2>(none, 0.0), DomainError);
}

TEST(TreeIndex, SingleParticleRootLeaf) {
  std::vector<Vec<2>> pts{{0.3, 0.4}};
  TreeIndex<2> t(pts, 4);
  ASSERT_EQ(t.nodes().size(), 1u);
  EXPECT_TRUE(t.nodes()[0].leaf);
}

TEST(TreeIndex, FourQuadrantsFourChildren) {
  std::vector<Vec<2>> pts{{0.1, 0.1}, {0.9, 0.1}, {0.1, 0.9}, {0.9, 0.9}};
  TreeIndex<2> t(pts, 2, 1);
  const auto& root = t.nodes()[0];
  ASSERT_FALSE(root.leaf);
  int occupied = 0;
  for (int c : root.children)
    if (c >= 0 && t.nodes()[static_cast<std::size_t>(c)].end > t.nodes()[static_cast<std::size_t>(c)].begin) ++occupied;
  EXPECT_EQ(occupied, 4);
}

TEST(TreeIndex, EveryIdInExactlyOneLeaf) {
  std::mt19937_64 rng(2);
  const auto pts = random_points<3>(rng, 3000, true);
  TreeIndex<3> t(pts, 5);
  std::vector<int> seen(pts.size(), 0);
  for (const auto& n : t.nodes())
    if (n.leaf)
      for (auto id : t.leaf_members(n)) ++seen[id];
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
}

TEST(Query, LineExample) {
  std::vector<Vec<1>> pts{{0.0}, {1.0}, {2.0}};
  BucketIndex<1> b(pts, 1.5);
  const auto r = b.query_radius(pts[0], 1.5, 0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (Neighbor{1, 1.0}));
  TreeIndex<1> t(pts, 3);
  EXPECT_EQ(t.query_radius(pts[0], 1.5, 0), r);
}

TEST(Query, CoincidentParticleAtDistanceZero) {
  std::vector<Vec<2>> pts{{0.5, 0.5}, {0.5, 0.5}, {0.9, 0.9}};
  BucketIndex<2> b(pts, 0.1);
  const auto r = b.query_radius(pts[0], 0.1, 0);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (Neighbor{1, 0.0}));
}

TEST(Query, TiesBrokenByAscendingId) {
  std::vector<Vec<2>> pts{{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  BucketIndex<2> b(pts, 1.0);
  const auto r = b.query_radius(pts[0], 1.0, 0);
  ASSERT_EQ(r.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(r[i].id, i + 1);
}

template <int Dim>
void check_oracle(std::uint64_t seed, bool clustered) {
  std::mt19937_64 rng(seed);
  const auto pts = random_points<Dim>(rng, 500, clustered);
  const double r = 0.08;
  BucketIndex<Dim> b(pts, r);
  TreeIndex<Dim> t(pts, 5);
  for (std::size_t i = 0; i < pts.size(); i += 7) {
    const auto ref = brute_force_radius<Dim>(pts, pts[i], r, i);
    EXPECT_EQ(b.query_radius(pts[i], r, i), ref);
    EXPECT_EQ(t.query_radius(pts[i], r, i), ref);
  }
}

TEST(Query, OracleEquivalence1d) { check_oracle<1>(10, false); }
TEST(Query, OracleEquivalence2d) {
  check_oracle<2>(11, false);
  check_oracle<2>(12, true);
}
TEST(Query, OracleEquivalence3d) {
  check_oracle<3>(13, false);
  check_oracle<3>(14, true);
}

TEST(Query, PermutationInvariance) {
  std::mt19937_64 rng(21);
  auto pts = random_points<2>(rng, 400, true);
  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Vec<2>> shuffled(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) shuffled[perm[i]] = pts[i];
  BucketIndex<2> a(pts, 0.1), b(shuffled, 0.1);
  for (std::size_t i = 0; i < pts.size(); i += 5) {
    auto ra = a.query_radius(pts[i], 0.1, i);
    auto rb = b.query_radius(shuffled[perm[i]], 0.1, perm[i]);
    for (auto& n : ra) n.id = perm[n.id];
    sort_neighbors(ra);
    EXPECT_EQ(ra, rb);
  }
}

TEST(NeighborIndex, VariantDispatchMatchesBruteForce) {
  std::mt19937_64 rng(31);
  const auto pts = random_points<2>(rng, 300, false);
  const auto bucket = NeighborIndex<2>::bucket(pts, 0.1);
  const auto tree = NeighborIndex<2>::tree(pts, 4);
  EXPECT_EQ(bucket.size(), pts.size());
  for (std::size_t i = 0; i < pts.size(); i += 11) {
    const auto ref = brute_force_radius<2>(pts, pts[i], 0.1, i);
    EXPECT_EQ(bucket.query_radius(pts[i], 0.1, i), ref);
    EXPECT_EQ(tree.query_radius(pts[i], 0.1, i), ref);
  }
}
