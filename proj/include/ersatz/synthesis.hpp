#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ersatz/rng.hpp"
#include "ersatz/trajectory.hpp"

namespace ersatz {

/// Autocovariance of fractional Gaussian noise at integer lag `tau`:
/// (sigma1^2 / 2) (|tau-1|^{2H} - 2 tau^{2H} + (tau+1)^{2H}).
double fgn_autocovariance(std::size_t tau, double hurst, double sigma1);

/// Covariance of the MRW log-amplitude field: c2 ln(L / (|tau| + 1)) for |tau| < L, else 0.
double cascade_log_covariance(std::size_t tau, double c2, std::size_t integral_scale);

/// Exact sampler for a stationary Gaussian sequence via circulant embedding.
///
/// The covariance sequence is wrapped onto a circle of size M >= 2n (a power of
/// two) and diagonalized by one FFT. Negative eigenvalues no larger than
/// kClipTolerance times the largest one are set to zero; otherwise the circle is
/// doubled, up to kMaxEmbeddingFactor * n, before giving up with SynthesisError.
class CirculantGaussian {
 public:
  static constexpr double kClipTolerance = 1e-10;
  static constexpr std::size_t kMaxEmbeddingFactor = 16;

  CirculantGaussian(std::size_t length, const std::function<double(std::size_t)>& covariance);

  std::size_t length() const { return length_; }
  std::size_t embedding_size() const { return 2 * half_size_; }

  /// Draws one realization, consuming 2M normals from `rng`.
  std::vector<double> sample(Philox4x32& rng) const;

 private:
  std::size_t length_;
  std::size_t half_size_;
  std::vector<double> amplitudes_;  // sqrt(lambda_j / M)
};

/// Log-normal target marginal expressed through the parameters of log X.
struct LognormalMarginal {
  double log_mean;
  double log_std;

  static LognormalMarginal from_moments(double mean, double std);
  double quantile(double u) const;
  double cdf(double x) const;
  double mean() const;
  double variance() const;
};

/// Pointwise maps of a standard Gaussian onto a log-normal marginal:
/// rank 1 is F^{-1}(Phi(z)), rank 2 is F^{-1}(2 (Phi(|z|) - 1/2)).
double hermitian_transform(double z, int rank, const LognormalMarginal& marginal);

/// Relation between the correlation of a unit Gaussian pair and the
/// correlation of its image under a pointwise transform, via the Hermite
/// expansion f = sum_n b_n h_n with orthonormal Hermite polynomials h_n.
class HermiteCorrelationMap {
 public:
  static constexpr int kMaxOrder = 120;

  HermiteCorrelationMap(int rank, const LognormalMarginal& marginal);

  /// Correlation of f(X1), f(X2) when corr(X1, X2) = rho.
  double output_correlation(double rho) const;

  /// Solves output_correlation(rho) = target by safeguarded Newton iteration.
  /// Throws ConvergenceError when the target is unattainable or the
  /// iteration stalls.
  double input_correlation(double target) const;

  const std::vector<double>& coefficients() const { return coefficients_; }
  double variance() const { return variance_; }

 private:
  int rank_;
  std::vector<double> coefficients_;  // b_0 .. b_N
  double variance_;                   // exact Var f(Z)
  double tail_mass_;                  // Var - sum_{n=1..N} b_n^2, lumped at order N+1
};

/// How a realization is brought to zero mean and unit-scale std.
enum class Normalization {
  kSample,      // subtract the sample mean, rescale by the sample std (per realization)
  kPopulation,  // use the theoretical mean and std, so the realization is unconstrained
};

/// Reusable synthesizer: the expensive spectral setup depends on the spec
/// template only, realizations then differ by seed.
class NoiseSynthesizer {
 public:
  explicit NoiseSynthesizer(const NoiseSpec& spec);

  const NoiseSpec& spec() const { return spec_; }

  Trajectory noise(std::uint64_t seed, Normalization norm = Normalization::kSample) const;
  Trajectory motion(std::uint64_t seed, Normalization norm = Normalization::kSample) const;

 private:
  std::vector<double> unit_fgn(Philox4x32& rng, Normalization norm) const;

  NoiseSpec spec_;
  std::optional<CirculantGaussian> gaussian_;
  std::optional<CirculantGaussian> cascade_;
  std::optional<HermiteCorrelationMap> map_;
  std::optional<LognormalMarginal> marginal_;
};

Trajectory synth_fgn(const NoiseSpec& spec);
Trajectory synth_lognormal_noise(const NoiseSpec& spec, int rank);
Trajectory synth_mrw(const NoiseSpec& spec);

/// Dispatches on spec.kind.
Trajectory synthesize_noise(const NoiseSpec& spec);

/// m_t = sum_{k<=t} w_k with m_0 = 0 left implicit; output length equals input length.
Trajectory integrate_to_motion(const Trajectory& noise);

}  // namespace ersatz
