#include "ersatz/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ersatz/errors.hpp"

namespace ersatz {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

namespace {

double centered_sum_of_squares(std::span<const double> values) {
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return ss;
}

}  // namespace

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::sqrt(centered_sum_of_squares(values) / static_cast<double>(values.size()));
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  return std::sqrt(centered_sum_of_squares(values) / static_cast<double>(values.size() - 1));
}

double sample_autocovariance(std::span<const double> values, std::size_t lag) {
  const std::size_t n = values.size();
  if (lag >= n) throw LengthError("autocovariance lag exceeds series length");
  const double mu = mean(values);
  double acc = 0.0;
  for (std::size_t t = lag; t < n; ++t) acc += (values[t] - mu) * (values[t - lag] - mu);
  return acc / static_cast<double>(n);
}

double excess_kurtosis(std::span<const double> values) {
  const double mu = mean(values);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d2 = (v - mu) * (v - mu);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(values.size());
  m4 /= static_cast<double>(values.size());
  return m4 / (m2 * m2) - 3.0;
}

std::vector<double> standardize(std::span<const double> values) {
  const double mu = mean(values);
  const double sd = population_std(values);
  if (!(sd > 0.0)) throw DegeneracyError("cannot standardize a constant sample");
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return (v - mu) / sd; });
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw LengthError("fit_line needs at least two (x, y) pairs of equal length");
  const bool weighted = sigma.size() == n && std::all_of(sigma.begin(), sigma.end(), [](double s) { return s > 0.0; });

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? 1.0 / (sigma[i] * sigma[i]) : 1.0;
    sxx += w * (x[i] - xbar) * (x[i] - xbar);
    sxy += w * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw DegeneracyError("fit_line: all abscissae coincide");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  if (weighted) {
    fit.slope_error = std::sqrt(1.0 / sxx);
  } else if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_error = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_one_sample(std::size_t n) { return 1.628 / std::sqrt(static_cast<double>(n)); }

double ks_critical_two_sample(std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return 1.628 * std::sqrt((nn + mm) / (nn * mm));
}

double freedman_diaconis_width(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  return 2.0 * iqr * std::pow(static_cast<double>(sorted.size()), -1.0 / 3.0);
}

Histogram make_histogram(std::span<const double> values, double lower, double upper, std::size_t bins) {
  if (bins == 0 || !(upper > lower)) throw DomainError("histogram needs a positive bin count and range");
  Histogram h;
  h.lower = lower;
  h.width = (upper - lower) / static_cast<double>(bins);
  h.density.assign(bins, 0.0);
  std::size_t inside = 0;
  for (double v : values) {
    if (v < lower || v >= upper) continue;
    const auto bin = std::min(static_cast<std::size_t>((v - lower) / h.width), bins - 1);
    h.density[bin] += 1.0;
    ++inside;
  }
  if (inside > 0) {
    for (double& d : h.density) d /= static_cast<double>(inside) * h.width;
  }
  return h;
}

}  // namespace ersatz
