#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ersatz/errors.hpp"
#include "ersatz/oracles.hpp"

namespace ersatz::oracles {
namespace {

const double kH1 = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);

TEST(FbmCovariance, Examples) {
  EXPECT_NEAR(fbm_covariance(2, 1, 0.5, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(fbm_covariance(1, 0, 0.7, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(fbm_covariance(4, 2, 0.7, 1.0), 0.5 * std::pow(4.0, 1.4), 1e-12);
  EXPECT_NEAR(fbm_covariance(4, 2, 0.7, 1.0), 3.4822, 1e-4);
}

TEST(GaussianEntropy, Examples) {
  EXPECT_NEAR(gaussian_entropy({1.0}, 1), 1.41894, 1e-5);
  EXPECT_NEAR(gaussian_entropy({1, 0, 0, 1}, 2), 2.83788, 1e-5);
  EXPECT_NEAR(gaussian_entropy({1, 0.9, 0.9, 1}, 2), 2.00751, 1e-5);
  EXPECT_THROW(gaussian_entropy({1, 1, 1, 1}, 2), DomainError);
  EXPECT_THROW(gaussian_entropy({1, 0, 0}, 2), DomainError);
}

TEST(EmbeddingCovariance, TwoByTwo) {
  const auto c = fbm_embedding_covariance(4, 2, 2, 0.7, 1.0);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0], std::pow(4.0, 1.4), 1e-12);
  EXPECT_NEAR(c[3], std::pow(2.0, 1.4), 1e-12);
  EXPECT_NEAR(c[1], fbm_covariance(4, 2, 0.7, 1.0), 1e-12);
  EXPECT_EQ(c[1], c[2]);
}

TEST(UnitEntropy, Examples) {
  EXPECT_NEAR(fbm_unit_entropy(1.0), kH1, 1e-12);
  EXPECT_NEAR(fbm_unit_entropy(2.0), kH1 + std::log(2.0), 1e-12);
  const double s = std::exp(-kH1);
  EXPECT_NEAR(fbm_unit_entropy(s), 0.0, 1e-12);
}

TEST(ErsatzEntropyPred, Examples) {
  EXPECT_NEAR(fbm_ersatz_entropy_pred(1, 0.3, 1.0), kH1, 1e-12);
  EXPECT_NEAR(fbm_ersatz_entropy_pred(65536, 0.7, 1.0), 9.1822, 1e-4);
  EXPECT_NEAR(fbm_ersatz_entropy_pred(2048, 0.7, 1.0) - fbm_ersatz_entropy_pred(1024, 0.7, 1.0), 0.7 * std::log(2.0),
              1e-12);
}

TEST(CorrectionTerm, Properties) {
  EXPECT_NEAR(correction_term(0.0, 0.7), 0.0, 1e-15);
  EXPECT_NEAR(correction_term(1e-3, 0.7) / -6e-4, 1.0, 0.05);
  EXPECT_NEAR(correction_term_first_order(1e-3, 0.7), -6e-4, 1e-15);
  EXPECT_LE(std::abs(correction_term(64.0 / 65536.0, 0.7)), 2e-3);
}

TEST(AmiPred, Examples) {
  EXPECT_NEAR(fbm_ersatz_ami_pred(1, 65536, 0.7), 7.763, 1e-3);
  EXPECT_LT(fbm_ersatz_ami_pred(8, 1024, 0.7), fbm_ersatz_ami_pred(4, 1024, 0.7));
  const double slope = (fbm_ersatz_ami_pred(2, 1e9, 0.7) - fbm_ersatz_ami_pred(1, 1e9, 0.7)) / std::log(2.0);
  EXPECT_NEAR(slope, -0.7, 1e-6);
}

TEST(RatePred, Examples) {
  EXPECT_NEAR(fbm_ersatz_rate_pred(1, 1e12, 0.7, 1.0), kH1, 1e-9);
  const double T = 65536;
  const double d = fbm_ersatz_rate_pred(16, T, 0.7, 1.0) - fbm_ersatz_rate_pred(1, T, 0.7, 1.0);
  EXPECT_NEAR(d, 0.7 * std::log(16.0) - (correction_term(16 / T, 0.7) - correction_term(1 / T, 0.7)), 1e-12);
  EXPECT_NEAR(fbm_ersatz_rate_pred(16, T, 0.7, 1.0) + correction_term(16 / T, 0.7), kH1 + 2.8 * std::log(2.0), 1e-12);
}

TEST(RatePred, EqualsEntropyMinusAmi) {
  for (double tau : {1.0, 8.0}) {
    for (double T : {1024.0, 65536.0}) {
      EXPECT_NEAR(fbm_ersatz_rate_pred(tau, T, 0.7, 1.0),
                  fbm_ersatz_entropy_pred(T, 0.7, 1.0) - fbm_ersatz_ami_pred(tau, T, 0.7), 1e-12);
    }
  }
}

TEST(GaussianEntropy, FbmPairMatchesClosedForm) {
  const double t = 100, tau = 3, H = 0.7;
  const double a = std::pow(t, 2 * H), b = std::pow(t - tau, 2 * H);
  const double c = 0.5 * (a + b - std::pow(tau, 2 * H));
  const double expected = std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * std::log(a * b - c * c);
  EXPECT_NEAR(gaussian_entropy(fbm_embedding_covariance(t, 2, tau, H, 1.0), 2), expected, 1e-12);
}

TEST(Lognormal, TextbookStandard) {
  EXPECT_NEAR(lognormal_unit_entropy(std::exp(0.5), std::sqrt(std::numbers::e * (std::numbers::e - 1.0))), kH1,
              1e-12);
}

TEST(Lognormal, FormsDiffer) {
  const double a = lognormal_unit_entropy(1.0, 1.0, LognormalEntropyForm::kFootnote);
  const double b = lognormal_unit_entropy(1.0, 1.0, LognormalEntropyForm::kTextbook);
  EXPECT_NEAR(a - b, 0.5 * std::log(2.0), 1e-12);
  EXPECT_LT(lognormal_unit_entropy(1.0, 1e-3), lognormal_unit_entropy(1.0, 1e-2));
  EXPECT_THROW(lognormal_unit_entropy(0.0, 1.0), DomainError);
}

TEST(SelfSimilar, Examples) {
  EXPECT_NEAR(selfsimilar_entropy_pred(1, 1, 1, 0.7), 0.0, 1e-15);
  EXPECT_NEAR(selfsimilar_entropy_pred(2, 1, 1, 0.7), 0.7 * std::log(2.0), 1e-15);
  EXPECT_NEAR(selfsimilar_entropy_pred(1024, 2, 3, 0.7), 5.822, 1e-3);
  EXPECT_NEAR(selfsimilar_rate_pred(100, 8, 0.7), 0.7 * std::log(8.0), 1e-15);
}

}  // namespace
}  // namespace ersatz::oracles
