#pragma once

#include <cstddef>
#include <vector>

// Closed-form reference values for self-similar processes, in nats.
namespace ersatz::oracles {

/// E{x_t x_{t-tau}} of an fBm started at 0.
double fbm_covariance(double t, double tau, double hurst, double sigma1);

/// 1/2 ln((2 pi e)^d det cov) for a row-major d x d covariance.
double gaussian_entropy(const std::vector<double>& cov, std::size_t d);

/// Covariance of the fBm delay vector (x_t, x_{t-tau}, ..., x_{t-(m-1)tau}).
std::vector<double> fbm_embedding_covariance(double t, std::size_t m, double tau, double hurst, double sigma1);

/// H_1 = 1/2 ln(2 pi e sigma1^2).
double fbm_unit_entropy(double sigma1);

double fbm_ersatz_entropy_pred(double T, double hurst, double sigma1);

/// C(x) = 1/2 ln[(x/2 + 1/(2H+1)) / (x + 1/(2H+1))], x = tau/T.
double correction_term(double tau_over_T, double hurst);
/// First-order expansion -(2H+1)/4 x.
double correction_term_first_order(double tau_over_T, double hurst);

double fbm_ersatz_ami_pred(double tau, double T, double hurst);
double fbm_ersatz_rate_pred(double tau, double T, double hurst, double sigma1);

enum class LognormalEntropyForm {
  kFootnote,  // 1/2 ln(2 pi e s) + mu', s = 2 ln(1 + sigma^2/mu^2)
  kTextbook,  // 1/2 ln(2 pi e s^2) + mu', s^2 = ln(1 + sigma^2/mu^2)
};

/// Entropy of a log-normal variable with mean mu and std sigma.
double lognormal_unit_entropy(double mu, double sigma, LognormalEntropyForm form = LognormalEntropyForm::kTextbook);

/// Offset of H_t^{(m,tau)} relative to unit time: H ln t + (m-1) H ln tau.
double selfsimilar_entropy_pred(double t, double tau, std::size_t m, double hurst);
/// Offset of h_t^{(tau)}: H ln tau.
double selfsimilar_rate_pred(double t, double tau, double hurst);

}  // namespace ersatz::oracles
