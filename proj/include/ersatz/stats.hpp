#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ersatz {

double mean(std::span<const double> values);
/// Standard deviation with the 1/N normalization.
double population_std(std::span<const double> values);
/// Standard deviation with the 1/(N-1) normalization; 0 for fewer than two values.
double sample_std(std::span<const double> values);

/// Biased sample autocovariance at `lag` (1/N normalization, mean removed).
double sample_autocovariance(std::span<const double> values, std::size_t lag);

/// Excess kurtosis E[(x-mu)^4] / var^2 - 3.
double excess_kurtosis(std::span<const double> values);

/// Returns (x - mean) / std.
std::vector<double> standardize(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;  // one standard error
};

/// Least squares line through (x, y). When `sigma` is non-empty and all of its
/// entries are positive, points are weighted by 1/sigma^2 and the slope error
/// follows from those known uncertainties; otherwise an unweighted fit with
/// residual-based slope error is returned.
LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma = {});

/// sup |F_n(x) - F(x)| for the empirical CDF of `values`.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Asymptotic 1% critical values: 1.628 / sqrt(n) and 1.628 sqrt((n+m)/(nm)).
double ks_critical_one_sample(std::size_t n);
double ks_critical_two_sample(std::size_t n, std::size_t m);

/// Freedman-Diaconis bin width, 2 IQR n^{-1/3}.
double freedman_diaconis_width(std::span<const double> values);

struct Histogram {
  double lower = 0.0;
  double width = 0.0;
  std::vector<double> density;  // normalized so that sum(density) * width = 1 over in-range samples
};

Histogram make_histogram(std::span<const double> values, double lower, double upper, std::size_t bins);

}  // namespace ersatz
