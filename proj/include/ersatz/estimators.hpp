#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ersatz/embedding.hpp"
#include "ersatz/trajectory.hpp"

namespace ersatz {

/// Which delay vectors of a window enter an estimate at scale tau.
enum class PointSampling {
  kEveryTau,  // t = (m-1) tau, (m-1) tau + tau, ...: about T/tau points
  kAllTimes,  // every admissible t: T - (m-1) tau points
};

/// k-NN estimator parameters. The metric is always the max-norm.
struct EstimatorConfig {
  std::size_t k = 5;
  PointSampling sampling = PointSampling::kEveryTau;
  /// Jitter amplitude relative to each coordinate's sample std, used only
  /// when exact ties produce zero neighbor distances.
  double duplicate_jitter = 1e-10;
  std::uint64_t jitter_seed = 0;

  void validate(std::size_t point_count) const;
};

enum class Quantity {
  kEntropy,                // H_T^{(m,tau)}
  kAmi,                    // I_T^{(m,n,tau)}
  kEntropyRate,            // h_T^{(m,tau)} = H_T^{(1)} - I_T^{(m,1,tau)}
  kEntropyRateNormalized,  // h_T^{(m,tau)} - ln sigma_tau
  kEntropyRateDifference,  // h_T^{(m,tau)} = H_T^{(m+1,tau)} - H_T^{(m,tau)}
};

std::string_view to_string(Quantity q);
std::optional<Quantity> parse_quantity(std::string_view text);

/// A scalar information quantity in nats with its provenance.
struct InfoEstimate {
  double value = 0.0;
  Quantity quantity = Quantity::kEntropy;
  std::size_t m = 1;
  std::size_t n = 0;
  std::size_t tau = 1;
  std::size_t T = 0;  // window length in samples
  std::size_t k = 5;
  std::uint64_t seed = 0;
};

/// Integer-argument digamma psi(n), n >= 1.
double digamma(std::size_t n);

/// Kozachenko-Leonenko entropy with the max-norm:
/// psi(N) - psi(k) + d <ln(2 eps_i)>, eps_i the distance to the k-th neighbor.
InfoEstimate entropy_knn(const EmbeddedPointSet& pts, const EstimatorConfig& cfg);

/// Kraskov-Stoegbauer-Grassberger estimator, algorithm 1:
/// psi(k) + psi(N) - <psi(n_x + 1) + psi(n_y + 1)>.
/// Throws DegeneracyError when y is an exact copy of x.
InfoEstimate mutual_information_ksg(const EmbeddedPointSet& x, const EmbeddedPointSet& y, const EstimatorConfig& cfg);

// Ersatz quantities: the samples of one window are pooled and treated as if
// drawn from a stationary process. `seed` is recorded in the estimate only.

InfoEstimate ersatz_entropy(std::span<const double> series, std::size_t m, std::size_t tau,
                            const EstimatorConfig& cfg, std::uint64_t seed = 0);
InfoEstimate ersatz_ami(std::span<const double> series, std::size_t m, std::size_t n, std::size_t tau,
                        const EstimatorConfig& cfg, std::uint64_t seed = 0);
InfoEstimate ersatz_entropy_rate(std::span<const double> series, std::size_t m, std::size_t tau,
                                 const EstimatorConfig& cfg, std::uint64_t seed = 0);
/// Alternative assembly H^{(m+1)} - H^{(m)}, for cross-checking ersatz_entropy_rate.
InfoEstimate ersatz_entropy_rate_difference(std::span<const double> series, std::size_t m, std::size_t tau,
                                            const EstimatorConfig& cfg, std::uint64_t seed = 0);
InfoEstimate normalized_entropy_rate(std::span<const double> series, std::size_t m, std::size_t tau,
                                     const EstimatorConfig& cfg, std::uint64_t seed = 0);

InfoEstimate ersatz_entropy(const Trajectory& traj, std::size_t m, std::size_t tau, const EstimatorConfig& cfg);
InfoEstimate ersatz_ami(const Trajectory& traj, std::size_t m, std::size_t n, std::size_t tau,
                        const EstimatorConfig& cfg);
InfoEstimate ersatz_entropy_rate(const Trajectory& traj, std::size_t m, std::size_t tau, const EstimatorConfig& cfg);
InfoEstimate normalized_entropy_rate(const Trajectory& traj, std::size_t m, std::size_t tau,
                                     const EstimatorConfig& cfg);

/// Generic dispatch; `n` is used by kAmi only.
InfoEstimate estimate_quantity(Quantity q, std::span<const double> series, std::size_t m, std::size_t n,
                               std::size_t tau, const EstimatorConfig& cfg, std::uint64_t seed = 0);

enum class WindowMode {
  kAverage,  // estimate per window, then average
  kPool,     // gather the points of all windows (each rebased to start at 0) into one estimate
};

/// Splits a long series into floor(len / window) non-overlapping windows.
InfoEstimate windowed_estimate(Quantity q, std::span<const double> series, std::size_t window, WindowMode mode,
                               std::size_t m, std::size_t n, std::size_t tau, const EstimatorConfig& cfg,
                               std::uint64_t seed = 0);

}  // namespace ersatz
