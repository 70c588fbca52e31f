#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ersatz/estimators.hpp"
#include "ersatz/stats.hpp"
#include "ersatz/trajectory.hpp"

namespace ersatz {

inline constexpr int kOutputSchemaVersion = 1;
inline constexpr std::string_view kLibraryVersion = "1.0.0";

enum class SweepAxis { kWindowT, kScaleTau, kNeighborsK, kEmbeddingM };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view text);

/// One quantity evaluated at every grid point. The swept axis overrides the
/// matching field (tau, m) or the plan-wide setting (T, k).
struct QuantityRequest {
  Quantity quantity = Quantity::kEntropyRate;
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t tau = 1;
};

struct SweepPlan {
  NoiseSpec process;  // process.seed is replaced by the per-realization seed
  Role role = Role::kMotion;
  SweepAxis axis = SweepAxis::kWindowT;
  std::vector<std::size_t> grid;
  std::size_t realizations = 20;
  std::uint64_t base_seed = 1;
  EstimatorConfig estimator;
  /// Window length for axes other than window_T; 0 means process.length.
  std::size_t window = 0;
  std::vector<QuantityRequest> quantities;
  /// Largest grid points left out of the slope fit.
  std::size_t fit_exclude_largest = 0;
  std::size_t threads = 0;

  std::size_t window_for(std::size_t grid_value) const;
  /// Throws DomainError or LengthError describing the first violation.
  void validate() const;
};

struct SweepRow {
  std::size_t axis_value = 0;
  QuantityRequest request;  // after the axis override
  std::size_t T = 0;
  std::size_t k = 0;
  double mean = 0.0;
  double std = 0.0;  // ensemble std, 1/(R-1) normalization; 0 for R = 1
  std::size_t realizations = 0;
  std::vector<double> values;  // one per realization, in realization order
};

struct SweepResult {
  SweepPlan plan;
  std::vector<SweepRow> rows;  // grid-major, quantities in request order
  double wall_seconds = 0.0;
};

SweepResult run_sweep(const SweepPlan& plan);

/// Rows of result.rows that belong to quantity request `q` (index into
/// plan.quantities), in grid order.
std::vector<const SweepRow*> series_of(const SweepResult& result, std::size_t q);

/// Weighted least squares of the ensemble mean against ln(axis value), with
/// the std error of the mean as uncertainty. The `exclude_largest` biggest
/// grid points are left out.
LinearFit fit_series(const std::vector<const SweepRow*>& rows, std::size_t exclude_largest = 0);

/// Ersatz entropy rate over a (k, T) grid, with the collapse coordinate
/// k / T^{1/(m+1)} and the bias against `reference`.
struct BiasPoint {
  std::size_t k = 0;
  std::size_t T = 0;
  double ratio = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double bias = 0.0;
};

struct BiasGridResult {
  NoiseSpec process;
  std::size_t m = 1;
  std::size_t tau = 1;
  std::size_t realizations = 0;
  std::uint64_t base_seed = 0;
  double reference = 0.0;
  std::vector<BiasPoint> points;  // T-major, then k
  double wall_seconds = 0.0;
};

/// The asymptote of the entropy rate at `tau` for window T: the fBm
/// prediction for fGn noise, the marginal entropy of the noise otherwise.
double rate_reference(const NoiseSpec& process, std::size_t tau, std::size_t T);

BiasGridResult bias_grid(const NoiseSpec& process, const std::vector<std::size_t>& k_grid,
                         const std::vector<std::size_t>& T_grid, std::size_t m, std::size_t tau,
                         std::size_t realizations, std::uint64_t base_seed, std::size_t threads = 0);

/// Ensemble std of entropy, AMI and entropy rate (m = n = 1, tau) over a T grid.
SweepResult std_vs_T(const NoiseSpec& process, const std::vector<std::size_t>& T_grid, std::size_t realizations,
                     std::uint64_t base_seed, std::size_t tau = 1, const EstimatorConfig& cfg = {},
                     std::size_t threads = 0);

/// Unit-std increment statistics of a motion across scales.
struct IncrementPdfResult {
  NoiseSpec process;
  std::vector<std::size_t> taus;
  std::size_t realizations = 0;
  std::uint64_t base_seed = 0;
  Histogram bins_template;                 // shared bin edges (density unused)
  std::vector<std::vector<double>> density;  // per tau
  std::vector<double> excess_kurtosis;       // per tau
  /// Two-sample KS distance of each tau against the first one, and the 1%
  /// critical value for that pair.
  std::vector<double> ks_vs_first;
  std::vector<double> ks_critical;
  double wall_seconds = 0.0;
};

/// Increments of size tau are standardized per realization (mean removed,
/// scaled to unit std) and pooled over realizations. Bins follow the
/// Freedman-Diaconis rule on all pooled values and are shared across tau.
IncrementPdfResult increment_pdf(const NoiseSpec& process, const std::vector<std::size_t>& taus,
                                 std::size_t realizations, std::uint64_t base_seed, std::size_t threads = 0);

/// Ensemble ("general framework") entropy at fixed times t, over realizations.
struct EnsemblePoint {
  std::size_t t = 0;
  double entropy = 0.0;
};

struct EnsembleResult {
  NoiseSpec process;
  std::size_t m = 1;
  std::size_t tau = 1;
  std::size_t realizations = 0;
  std::uint64_t base_seed = 0;
  std::size_t k = 5;
  std::vector<EnsemblePoint> points;
  double wall_seconds = 0.0;
};

/// For each t, KL entropy of the R delay vectors (x_t, ..., x_{t-(m-1)tau}),
/// one per realization, where x_t is the motion with x_0 = 0.
EnsembleResult ensemble_fixed_time(const NoiseSpec& process, const std::vector<std::size_t>& times, std::size_t m,
                                   std::size_t tau, std::size_t realizations, std::uint64_t base_seed,
                                   const EstimatorConfig& cfg = {}, std::size_t threads = 0);

/// Least squares slope of the ensemble entropy against ln t. The slope error
/// is residual based.
LinearFit fit_ensemble(const EnsembleResult& result);

// Output. Every CSV row echoes the full parameter set.

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_bias_csv(const std::filesystem::path& path, const BiasGridResult& result);
void write_increment_pdf_csv(const std::filesystem::path& path, const IncrementPdfResult& result);
void write_increment_stats_csv(const std::filesystem::path& path, const IncrementPdfResult& result);
void write_ensemble_csv(const std::filesystem::path& path, const EnsembleResult& result);

nlohmann::json to_json(const SweepPlan& plan);

}  // namespace ersatz
