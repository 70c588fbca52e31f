#include "ersatz/oracles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "ersatz/errors.hpp"

namespace ersatz::oracles {

namespace {

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("hurst must lie in (0,1), got " + std::to_string(hurst));
}

void check_sigma(double sigma1) {
  if (!(sigma1 > 0.0)) throw DomainError("sigma1 must be positive");
}

const double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

}  // namespace

double fbm_covariance(double t, double tau, double hurst, double sigma1) {
  check_hurst(hurst);
  check_sigma(sigma1);
  if (!(tau >= 0.0 && tau < t)) throw DomainError("fbm_covariance needs 0 <= tau < t");
  const double a = 2.0 * hurst;
  return 0.5 * sigma1 * sigma1 * (std::pow(t, a) + std::pow(t - tau, a) - std::pow(tau, a));
}

double gaussian_entropy(const std::vector<double>& cov, std::size_t d) {
  if (d == 0 || cov.size() != d * d) throw DomainError("covariance must be d x d with d >= 1");
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      cov.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const Eigen::LLT<Eigen::MatrixXd> llt(mat);
  if (llt.info() != Eigen::Success) throw DomainError("covariance is not positive definite");
  double log_det = 0.0;
  const Eigen::MatrixXd& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i));
  return 0.5 * (static_cast<double>(d) * std::log(kTwoPiE) + log_det);
}

std::vector<double> fbm_embedding_covariance(double t, std::size_t m, double tau, double hurst, double sigma1) {
  if (m == 0) throw DomainError("embedding dimension must be >= 1");
  if (!(static_cast<double>(m - 1) * tau < t)) throw DomainError("embedding reaches below time 0");
  check_hurst(hurst);
  check_sigma(sigma1);
  // E{x_a x_b} = sigma1^2/2 (a^{2H} + b^{2H} - |a-b|^{2H})
  const double two_h = 2.0 * hurst;
  std::vector<double> cov(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double a = t - static_cast<double>(i) * tau;
      const double b = t - static_cast<double>(j) * tau;
      cov[i * m + j] =
          0.5 * sigma1 * sigma1 * (std::pow(a, two_h) + std::pow(b, two_h) - std::pow(std::abs(a - b), two_h));
    }
  }
  return cov;
}

double fbm_unit_entropy(double sigma1) {
  check_sigma(sigma1);
  return 0.5 * std::log(kTwoPiE * sigma1 * sigma1);
}

double fbm_ersatz_entropy_pred(double T, double hurst, double sigma1) {
  check_hurst(hurst);
  if (!(T >= 1.0)) throw DomainError("window T must be >= 1");
  return fbm_unit_entropy(sigma1) + hurst * std::log(T);
}

double correction_term(double tau_over_T, double hurst) {
  check_hurst(hurst);
  if (!(tau_over_T >= 0.0 && tau_over_T <= 1.0)) throw DomainError("tau/T must lie in [0,1]");
  const double b = 1.0 / (2.0 * hurst + 1.0);
  return 0.5 * std::log((0.5 * tau_over_T + b) / (tau_over_T + b));
}

double correction_term_first_order(double tau_over_T, double hurst) {
  check_hurst(hurst);
  return -(2.0 * hurst + 1.0) / 4.0 * tau_over_T;
}

double fbm_ersatz_ami_pred(double tau, double T, double hurst) {
  if (!(tau >= 1.0 && tau <= T)) throw DomainError("need 1 <= tau <= T");
  return -hurst * std::log(tau / T) + correction_term(tau / T, hurst);
}

double fbm_ersatz_rate_pred(double tau, double T, double hurst, double sigma1) {
  if (!(tau >= 1.0 && tau <= T)) throw DomainError("need 1 <= tau <= T");
  return fbm_unit_entropy(sigma1) + hurst * std::log(tau) - correction_term(tau / T, hurst);
}

double lognormal_unit_entropy(double mu, double sigma, LognormalEntropyForm form) {
  if (!(mu > 0.0) || !(sigma > 0.0)) throw DomainError("log-normal mean and std must be positive");
  const double ratio = sigma * sigma / (mu * mu);
  const double log_mean = std::log(mu * mu / std::sqrt(mu * mu + sigma * sigma));
  if (form == LognormalEntropyForm::kFootnote) {
    return 0.5 * std::log(kTwoPiE * 2.0 * std::log1p(ratio)) + log_mean;
  }
  return 0.5 * std::log(kTwoPiE * std::log1p(ratio)) + log_mean;
}

double selfsimilar_entropy_pred(double t, double tau, std::size_t m, double hurst) {
  check_hurst(hurst);
  if (!(t > 0.0) || !(tau > 0.0) || m == 0) throw DomainError("need t > 0, tau > 0, m >= 1");
  return hurst * std::log(t) + static_cast<double>(m - 1) * hurst * std::log(tau);
}

double selfsimilar_rate_pred(double t, double tau, double hurst) {
  check_hurst(hurst);
  if (!(t > 0.0) || !(tau > 0.0)) throw DomainError("need t > 0 and tau > 0");
  return hurst * std::log(tau);
}

}  // namespace ersatz::oracles
