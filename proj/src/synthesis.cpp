#include "ersatz/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "ersatz/errors.hpp"
#include "ersatz/stats.hpp"
#include "fft.hpp"

namespace ersatz {

double fgn_autocovariance(std::size_t tau, double hurst, double sigma1) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("fgn_autocovariance: hurst must lie in (0,1), got " + std::to_string(hurst));
  }
  if (!(sigma1 > 0.0)) {
    throw DomainError("fgn_autocovariance: sigma1 must be positive, got " + std::to_string(sigma1));
  }
  const double two_h = 2.0 * hurst;
  const double t = static_cast<double>(tau);
  const double below = std::pow(std::abs(t - 1.0), two_h);
  return 0.5 * sigma1 * sigma1 * (below - 2.0 * std::pow(t, two_h) + std::pow(t + 1.0, two_h));
}

double cascade_log_covariance(std::size_t tau, double c2, std::size_t integral_scale) {
  if (tau >= integral_scale) return 0.0;
  return c2 * std::log(static_cast<double>(integral_scale) / (static_cast<double>(tau) + 1.0));
}

// ---------------------------------------------------------------------------

CirculantGaussian::CirculantGaussian(std::size_t length, const std::function<double(std::size_t)>& covariance)
    : length_(length) {
  if (length == 0) throw LengthError("circulant embedding of an empty sequence");
  std::size_t half = 1;
  while (half < length) half <<= 1;

  std::vector<double> cov_cache;
  for (;;) {
    const std::size_t size = 2 * half;
    while (cov_cache.size() <= half) cov_cache.push_back(covariance(cov_cache.size()));

    std::vector<std::complex<double>> row(size);
    for (std::size_t j = 0; j < size; ++j) row[j] = cov_cache[std::min(j, size - j)];
    detail::fft_forward(row);

    double max_eig = 0.0;
    double min_eig = 0.0;
    for (const auto& value : row) {
      max_eig = std::max(max_eig, value.real());
      min_eig = std::min(min_eig, value.real());
    }
    if (min_eig >= -kClipTolerance * max_eig) {
      half_size_ = half;
      amplitudes_.resize(size);
      const double scale = 1.0 / static_cast<double>(size);
      for (std::size_t j = 0; j < size; ++j) amplitudes_[j] = std::sqrt(std::max(row[j].real(), 0.0) * scale);
      return;
    }
    if (2 * half >= kMaxEmbeddingFactor * length) {
      throw SynthesisError("circulant embedding has a negative eigenvalue " + std::to_string(min_eig) +
                           " (largest " + std::to_string(max_eig) + ") at embedding size " +
                           std::to_string(size));
    }
    half *= 2;
  }
}

std::vector<double> CirculantGaussian::sample(Philox4x32& rng) const {
  std::vector<std::complex<double>> field(amplitudes_.size());
  for (std::size_t j = 0; j < field.size(); ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    field[j] = {amplitudes_[j] * re, amplitudes_[j] * im};
  }
  detail::fft_forward(field);
  std::vector<double> out(length_);
  for (std::size_t t = 0; t < length_; ++t) out[t] = field[t].real();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

const boost::math::normal_distribution<double> kStandardNormal{};

double normal_quantile(double u) { return boost::math::quantile(kStandardNormal, u); }

}  // namespace

LognormalMarginal LognormalMarginal::from_moments(double mean, double std) {
  if (!(mean > 0.0) || !(std > 0.0)) {
    throw DomainError("log-normal marginal needs positive mean and std");
  }
  const double ratio = std * std / (mean * mean);
  const double log_var = std::log1p(ratio);
  return {std::log(mean) - 0.5 * log_var, std::sqrt(log_var)};
}

double LognormalMarginal::quantile(double u) const { return std::exp(log_mean + log_std * normal_quantile(u)); }

double LognormalMarginal::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return 0.5 * std::erfc(-(std::log(x) - log_mean) / (log_std * std::numbers::sqrt2));
}

double LognormalMarginal::mean() const { return std::exp(log_mean + 0.5 * log_std * log_std); }

double LognormalMarginal::variance() const {
  const double s2 = log_std * log_std;
  return std::expm1(s2) * std::exp(2.0 * log_mean + s2);
}

double hermitian_transform(double z, int rank, const LognormalMarginal& marginal) {
  if (rank == 1) {
    // F^{-1}(Phi(z)) collapses to exp(mu' + s z) for a log-normal target.
    return std::exp(marginal.log_mean + marginal.log_std * z);
  }
  if (rank != 2) throw DomainError("hermitian_transform: rank must be 1 or 2");
  const double a = std::abs(z);
  if (a == 0.0) return 0.0;
  // u = 2 Phi(|z|) - 1 = erf(|z|/sqrt2); switch to the complement where u is close to 1.
  const double u = std::erf(a / std::numbers::sqrt2);
  double gaussian_level;
  if (u < 0.5) {
    gaussian_level = normal_quantile(u);
  } else {
    const double tail = std::max(std::erfc(a / std::numbers::sqrt2), std::numeric_limits<double>::min());
    gaussian_level = -normal_quantile(tail);
  }
  return std::exp(marginal.log_mean + marginal.log_std * gaussian_level);
}

// ---------------------------------------------------------------------------

HermiteCorrelationMap::HermiteCorrelationMap(int rank, const LognormalMarginal& marginal) : rank_(rank) {
  if (rank != 1 && rank != 2) throw DomainError("Hermite correlation map: rank must be 1 or 2");

  // b_n = E[f(Z) h_n(Z)] by composite Simpson. Rank 2 is even, so integrate on
  // [0, U] with z = v^2 to tame the cusp of f at the origin.
  const double upper = 14.0 + 2.0 * marginal.log_std;
  constexpr int kIntervals = 1 << 15;
  std::vector<double> sums(kMaxOrder + 1, 0.0);
  std::vector<double> herm(kMaxOrder + 1);

  const double lo = rank == 1 ? -upper : 0.0;
  const double hi = rank == 1 ? upper : std::sqrt(upper);
  const double step = (hi - lo) / kIntervals;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

  for (int i = 0; i <= kIntervals; ++i) {
    const double v = lo + step * i;
    const double z = rank == 1 ? v : v * v;
    const double jacobian = rank == 1 ? 1.0 : 2.0 * 2.0 * v;  // even integrand doubled, dz = 2v dv
    const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double base = weight * jacobian * hermitian_transform(z, rank, marginal) * inv_sqrt_2pi *
                        std::exp(-0.5 * z * z);
    if (base == 0.0) continue;
    herm[0] = 1.0;
    herm[1] = z;
    for (int n = 1; n < kMaxOrder; ++n) {
      herm[n + 1] = (z * herm[n] - std::sqrt(static_cast<double>(n)) * herm[n - 1]) / std::sqrt(n + 1.0);
    }
    for (int n = 0; n <= kMaxOrder; ++n) sums[n] += base * herm[n];
  }

  coefficients_.resize(kMaxOrder + 1);
  for (int n = 0; n <= kMaxOrder; ++n) {
    coefficients_[n] = (rank == 2 && n % 2 == 1) ? 0.0 : sums[n] * step / 3.0;
  }
  variance_ = marginal.variance();
  double captured = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) captured += coefficients_[n] * coefficients_[n];
  tail_mass_ = std::max(variance_ - captured, 0.0);
}

double HermiteCorrelationMap::output_correlation(double rho) const {
  // Horner on sum_{n=1}^{N} b_n^2 rho^n + tail rho^{N+1}.
  double acc = tail_mass_;
  for (int n = kMaxOrder; n >= 1; --n) acc = acc * rho + coefficients_[n] * coefficients_[n];
  return acc * rho / variance_;
}

double HermiteCorrelationMap::input_correlation(double target) const {
  if (target >= 1.0) {
    if (target > 1.0 + 1e-12) throw ConvergenceError("target correlation above 1");
    return 1.0;
  }
  double lo = rank_ == 1 ? -1.0 : 0.0;
  double hi = 1.0;
  const double g_lo = output_correlation(lo);
  if (target < g_lo) {
    throw ConvergenceError("target correlation " + std::to_string(target) +
                           " is below the attainable minimum " + std::to_string(g_lo) + " for rank " +
                           std::to_string(rank_));
  }
  auto derivative = [this](double rho) {
    double acc = (kMaxOrder + 1) * tail_mass_;
    for (int n = kMaxOrder; n >= 1; --n) acc = acc * rho + n * coefficients_[n] * coefficients_[n];
    return acc / variance_;
  };

  double rho = std::clamp(target, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = output_correlation(rho) - target;
    if (std::abs(residual) <= 1e-14) return rho;
    if (residual > 0.0) hi = rho; else lo = rho;
    const double slope = derivative(rho);
    double next = slope > 0.0 ? rho - residual / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15) return 0.5 * (lo + hi);
    rho = next;
  }
  throw ConvergenceError("correlation mapping did not converge for target " + std::to_string(target));
}

// ---------------------------------------------------------------------------

namespace {

void center(std::vector<double>& values) {
  const double mu = mean(values);
  for (double& v : values) v -= mu;
}

void center_and_scale(std::vector<double>& values, double target_std) {
  center(values);
  const double sd = population_std(values);
  if (!(sd > 0.0)) throw SynthesisError("synthesized noise has zero variance");
  const double factor = target_std / sd;
  for (double& v : values) v *= factor;
}

}  // namespace

NoiseSynthesizer::NoiseSynthesizer(const NoiseSpec& spec) : spec_(spec) {
  spec_.validate();
  const std::size_t n = spec_.length;
  switch (spec_.kind) {
    case NoiseKind::kFgn: {
      const double h = spec_.hurst;
      gaussian_.emplace(n, [h](std::size_t tau) { return fgn_autocovariance(tau, h, 1.0); });
      break;
    }
    case NoiseKind::kMrw: {
      const double h = spec_.hurst + spec_.c2;
      gaussian_.emplace(n, [h](std::size_t tau) { return fgn_autocovariance(tau, h, 1.0); });
      if (spec_.c2 > 0.0) {
        const double c2 = spec_.c2;
        const std::size_t scale = spec_.effective_integral_scale();
        cascade_.emplace(n, [c2, scale](std::size_t tau) { return cascade_log_covariance(tau, c2, scale); });
      }
      break;
    }
    case NoiseKind::kLognormalH1:
    case NoiseKind::kLognormalH2: {
      const int rank = spec_.kind == NoiseKind::kLognormalH1 ? 1 : 2;
      marginal_ = LognormalMarginal::from_moments(spec_.lognormal_mu, spec_.lognormal_sigma);
      map_.emplace(rank, *marginal_);
      const double h = spec_.hurst;
      const HermiteCorrelationMap& map = *map_;
      gaussian_.emplace(n, [h, &map](std::size_t tau) {
        return tau == 0 ? 1.0 : map.input_correlation(fgn_autocovariance(tau, h, 1.0));
      });
      break;
    }
  }
}

std::vector<double> NoiseSynthesizer::unit_fgn(Philox4x32& rng, Normalization norm) const {
  std::vector<double> w = gaussian_->sample(rng);
  if (norm == Normalization::kSample) center_and_scale(w, 1.0);
  return w;
}

Trajectory NoiseSynthesizer::noise(std::uint64_t seed, Normalization norm) const {
  Trajectory out;
  out.role = Role::kNoise;
  out.spec = spec_;
  out.spec.seed = seed;
  Philox4x32 rng = make_rng(seed, Substream::kGaussianField);

  switch (spec_.kind) {
    case NoiseKind::kFgn: {
      out.samples = unit_fgn(rng, norm);
      for (double& v : out.samples) v *= spec_.sigma1;
      break;
    }
    case NoiseKind::kMrw: {
      out.samples = unit_fgn(rng, norm);
      if (cascade_) {
        Philox4x32 cascade_rng = make_rng(seed, Substream::kCascadeField);
        const std::vector<double> omega = cascade_->sample(cascade_rng);
        for (std::size_t t = 0; t < omega.size(); ++t) out.samples[t] *= std::exp(omega[t]);
      }
      if (norm == Normalization::kSample) {
        center_and_scale(out.samples, spec_.sigma1);
      } else {
        // E[e^{2 omega}] = e^{2 Var omega} for the zero-mean Gaussian cascade.
        const double var_omega = cascade_ ? cascade_log_covariance(0, spec_.c2, spec_.effective_integral_scale()) : 0.0;
        const double scale = spec_.sigma1 * std::exp(-var_omega);
        for (double& v : out.samples) v *= scale;
      }
      break;
    }
    case NoiseKind::kLognormalH1:
    case NoiseKind::kLognormalH2: {
      const int rank = spec_.kind == NoiseKind::kLognormalH1 ? 1 : 2;
      out.samples = gaussian_->sample(rng);
      for (double& v : out.samples) v = hermitian_transform(v, rank, *marginal_);
      if (norm == Normalization::kSample) {
        center(out.samples);
      } else {
        const double mu = marginal_->mean();
        for (double& v : out.samples) v -= mu;
      }
      break;
    }
  }
  return out;
}

Trajectory NoiseSynthesizer::motion(std::uint64_t seed, Normalization norm) const {
  return integrate_to_motion(noise(seed, norm));
}

Trajectory synth_fgn(const NoiseSpec& spec) {
  if (spec.kind != NoiseKind::kFgn) throw DomainError("synth_fgn requires kind=fgn");
  return NoiseSynthesizer(spec).noise(spec.seed);
}

Trajectory synth_lognormal_noise(const NoiseSpec& spec, int rank) {
  const NoiseKind expected = rank == 1 ? NoiseKind::kLognormalH1 : NoiseKind::kLognormalH2;
  if ((rank != 1 && rank != 2) || spec.kind != expected) {
    throw DomainError("synth_lognormal_noise: rank must match kind lognormal_h1 / lognormal_h2");
  }
  return NoiseSynthesizer(spec).noise(spec.seed);
}

Trajectory synth_mrw(const NoiseSpec& spec) {
  if (spec.kind != NoiseKind::kMrw) throw DomainError("synth_mrw requires kind=mrw");
  return NoiseSynthesizer(spec).noise(spec.seed);
}

Trajectory synthesize_noise(const NoiseSpec& spec) { return NoiseSynthesizer(spec).noise(spec.seed); }

Trajectory integrate_to_motion(const Trajectory& noise) {
  if (noise.role != Role::kNoise) throw DomainError("integrate_to_motion expects a noise trajectory");
  Trajectory motion{{}, Role::kMotion, noise.spec};
  motion.samples.resize(noise.samples.size());
  std::partial_sum(noise.samples.begin(), noise.samples.end(), motion.samples.begin());
  return motion;
}

}  // namespace ersatz
