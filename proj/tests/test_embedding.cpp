#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ersatz/embedding.hpp"
#include "ersatz/errors.hpp"
#include "ersatz/stats.hpp"
#include "ersatz/synthesis.hpp"

namespace ersatz {
namespace {

std::vector<std::vector<double>> points(const EmbeddedPointSet& p) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back(p.point(i).begin(), p.point(i).end());
  return out;
}

Trajectory series(std::vector<double> v) {
  Trajectory t;
  t.samples = std::move(v);
  t.role = Role::kMotion;
  return t;
}

TEST(TakensEmbed, Examples) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_EQ(points(takens_embed(x, {1, 1})), (std::vector<std::vector<double>>{{1}, {2}, {3}, {4}}));
  EXPECT_EQ(points(takens_embed(x, {2, 1})), (std::vector<std::vector<double>>{{2, 1}, {3, 2}, {4, 3}}));
  const std::vector<double> y{1, 2, 3, 4, 5};
  EXPECT_EQ(points(takens_embed(y, {2, 2})), (std::vector<std::vector<double>>{{3, 1}, {4, 2}, {5, 3}}));
}

TEST(TakensEmbed, Strided) {
  std::vector<double> x(10);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i);
  EXPECT_EQ(points(takens_embed(x, {2, 3}, 3)),
            (std::vector<std::vector<double>>{{3, 0}, {6, 3}, {9, 6}}));
  EXPECT_EQ(points(takens_embed(x, {1, 4}, 4)), (std::vector<std::vector<double>>{{0}, {4}, {8}}));
  EXPECT_EQ(points(takens_embed(x, {2, 1}, 1)), points(takens_embed(x, {2, 1})));
}

TEST(TakensEmbed, Validation) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(takens_embed(x, {0, 1}), DomainError);
  EXPECT_THROW(takens_embed(x, {1, 0}), DomainError);
  EXPECT_THROW(takens_embed(x, {2, 3}), LengthError);
}

TEST(Increments, Examples) {
  EXPECT_EQ(increment_series(series({1, 2, 4, 7}), 1).samples, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(increment_series(series({1, 2, 4, 7}), 2).samples, (std::vector<double>{3, 5}));
  EXPECT_EQ(increment_series(series({1, 2, 4, 7}), 1).role, Role::kNoise);
}

TEST(Increments, InvertIntegration) {
  Trajectory w = series({0.5, -1.0, 2.0, 0.25});
  w.role = Role::kNoise;
  const Trajectory d = increment_series(integrate_to_motion(w), 1);
  ASSERT_EQ(d.size(), 3u);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_DOUBLE_EQ(d.samples[i], w.samples[i + 1]);
}

TEST(IncrementTransform, Examples) {
  EmbeddedPointSet p2(2, {4, 3}, {2, 1});
  EXPECT_EQ(increment_transform(p2).coords, (std::vector<double>{4, 1}));
  EmbeddedPointSet p3(3, {6, 4, 1}, {3, 1});
  EXPECT_EQ(increment_transform(p3).coords, (std::vector<double>{6, 2, 3}));
  EXPECT_EQ(inverse_increment_transform(increment_transform(p3)).coords, p3.coords);
}

TEST(IncrementTransform, UnitDeterminant) {
  for (std::size_t m = 1; m <= 8; ++m) EXPECT_EQ(std::abs(increment_matrix_determinant(m)), 1.0) << m;
}

TEST(IncrementStd, BrownianScaling) {
  NoiseSpec s;
  s.hurst = 0.5;
  s.length = 1 << 14;
  const NoiseSynthesizer synth(s);
  double ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Trajectory m = synth.motion(seed);
    ratio += increment_std(m, 4) / increment_std(m, 1) / 20;
  }
  EXPECT_NEAR(ratio, 2.0, 0.1);
}

TEST(IncrementStd, FbmSlope) {
  NoiseSpec s;
  s.length = 1 << 16;
  const Trajectory m = NoiseSynthesizer(s).motion(1);
  std::vector<double> lx, ly;
  for (std::size_t e = 0; e <= 7; ++e) {
    lx.push_back(std::log(double(std::size_t{1} << e)));
    ly.push_back(std::log(increment_std(m, std::size_t{1} << e)));
  }
  EXPECT_NEAR(fit_line(lx, ly).slope, 0.7, 0.02);
}

TEST(IncrementStd, ConstantSeriesThrows) {
  EXPECT_THROW(increment_std(series({2, 2, 2, 2}), 1), DegeneracyError);
}

}  // namespace
}  // namespace ersatz
