#include <gtest/gtest.h>

#include <vector>

#include "ersatz/neighbors.hpp"
#include "ersatz/rng.hpp"

namespace ersatz {
namespace {

EmbeddedPointSet random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed, bool ties = false) {
  Philox4x32 g(seed, 0);
  std::vector<double> c(n * dim);
  for (double& v : c) v = ties ? double(int(g.uniform() * 20)) : g.normal();
  return EmbeddedPointSet(dim, std::move(c));
}

class BackendTest : public ::testing::TestWithParam<std::tuple<NeighborIndex::Backend, std::size_t>> {};

TEST_P(BackendTest, MatchesBruteForce) {
  const auto [backend, dim] = GetParam();
  for (bool ties : {false, true}) {
    const EmbeddedPointSet pts = random_cloud(600, dim, 11 + dim, ties);
    const NeighborIndex index(pts, backend, 4);
    for (std::size_t i = 0; i < pts.size(); i += 7) {
      for (std::size_t k : {1, 3, 8}) {
        const double d = index.kth_neighbor_distance(i, k);
        ASSERT_EQ(d, brute_kth_neighbor_distance(pts, i, k)) << "i=" << i << " k=" << k;
        ASSERT_EQ(index.count_within(i, d), brute_count_within(pts, i, d));
        ASSERT_EQ(index.count_within(i, 0.5), brute_count_within(pts, i, 0.5));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Backends, BackendTest,
                         ::testing::Values(std::tuple{NeighborIndex::Backend::kKdTree, std::size_t{1}},
                                           std::tuple{NeighborIndex::Backend::kKdTree, std::size_t{2}},
                                           std::tuple{NeighborIndex::Backend::kKdTree, std::size_t{4}},
                                           std::tuple{NeighborIndex::Backend::kSorted1d, std::size_t{1}},
                                           std::tuple{NeighborIndex::Backend::kBruteForce, std::size_t{3}}));

TEST(MaxNorm, Distance) {
  const std::vector<double> a{0.0, 1.0, -2.0}, b{0.5, -1.0, -2.0};
  EXPECT_EQ(max_norm_distance(a, b), 2.0);
}

TEST(NeighborIndex, ExcludesSelfButNotDuplicates) {
  const EmbeddedPointSet pts(1, {1.0, 1.0, 3.0});
  const NeighborIndex index(pts, NeighborIndex::Backend::kSorted1d);
  EXPECT_EQ(index.kth_neighbor_distance(0, 1), 0.0);
  EXPECT_EQ(index.kth_neighbor_distance(2, 1), 2.0);
  EXPECT_EQ(index.count_within(2, 2.0), 0u);
  EXPECT_EQ(index.count_within(2, 2.0000001), 2u);
}

TEST(NeighborIndex, AutoPicksSortedForOneDimension) {
  EXPECT_EQ(NeighborIndex(random_cloud(5000, 1, 1)).backend(), NeighborIndex::Backend::kSorted1d);
  EXPECT_EQ(NeighborIndex(random_cloud(5000, 2, 1)).backend(), NeighborIndex::Backend::kKdTree);
}

}  // namespace
}  // namespace ersatz
