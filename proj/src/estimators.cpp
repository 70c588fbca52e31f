#include "ersatz/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include <boost/math/special_functions/digamma.hpp>

#include "ersatz/errors.hpp"
#include "ersatz/neighbors.hpp"
#include "ersatz/rng.hpp"
#include "ersatz/stats.hpp"

namespace ersatz {

void EstimatorConfig::validate(std::size_t point_count) const {
  if (k < 1) throw DomainError("k must be >= 1");
  if (k >= point_count) {
    throw LengthError("k=" + std::to_string(k) + " must be below the number of points N=" + std::to_string(point_count));
  }
  if (!(duplicate_jitter > 0.0)) throw DomainError("duplicate_jitter must be positive");
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::kEntropy: return "entropy";
    case Quantity::kAmi: return "ami";
    case Quantity::kEntropyRate: return "rate";
    case Quantity::kEntropyRateNormalized: return "rate-normalized";
    case Quantity::kEntropyRateDifference: return "rate-diff";
  }
  return "unknown";
}

std::optional<Quantity> parse_quantity(std::string_view text) {
  for (Quantity q : {Quantity::kEntropy, Quantity::kAmi, Quantity::kEntropyRate, Quantity::kEntropyRateNormalized,
                     Quantity::kEntropyRateDifference}) {
    if (text == to_string(q)) return q;
  }
  return std::nullopt;
}

double digamma(std::size_t n) {
  if (n < 1) throw DomainError("digamma defined here for n >= 1 only");
  return boost::math::digamma(static_cast<double>(n));
}

namespace {

constexpr double kMaxZeroFraction = 0.01;

EmbeddedPointSet jittered(const EmbeddedPointSet& pts, const EstimatorConfig& cfg) {
  EmbeddedPointSet out = pts;
  Philox4x32 rng = make_rng(cfg.jitter_seed, Substream::kJitter);
  std::vector<double> column(pts.size());
  for (std::size_t d = 0; d < pts.dim; ++d) {
    for (std::size_t i = 0; i < pts.size(); ++i) column[i] = pts.coords[i * pts.dim + d];
    const double sd = population_std(column);
    if (!(sd > 0.0)) throw DegeneracyError("coordinate " + std::to_string(d) + " is constant across all points");
    const double amplitude = cfg.duplicate_jitter * sd;
    for (std::size_t i = 0; i < pts.size(); ++i) out.coords[i * pts.dim + d] += amplitude * (2.0 * rng.uniform() - 1.0);
  }
  return out;
}

std::size_t count_zeros(const std::vector<double>& eps) {
  std::size_t zeros = 0;
  for (double e : eps) zeros += e == 0.0 ? 1 : 0;
  return zeros;
}

void check_zero_fraction(std::size_t zeros, std::size_t total) {
  if (static_cast<double>(zeros) > kMaxZeroFraction * static_cast<double>(total)) {
    throw DegeneracyError(std::to_string(zeros) + " of " + std::to_string(total) +
                          " points have a zero k-th neighbor distance after jitter");
  }
}

std::vector<double> kth_distances(const NeighborIndex& index, std::size_t k) {
  std::vector<double> eps(index.size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = index.kth_neighbor_distance(i, k);
  return eps;
}

double kl_entropy(const EmbeddedPointSet& input, const EstimatorConfig& cfg) {
  cfg.validate(input.size());
  const EmbeddedPointSet* pts = &input;
  EmbeddedPointSet shaken;
  auto index = std::make_unique<NeighborIndex>(*pts);
  std::vector<double> eps = kth_distances(*index, cfg.k);
  std::size_t zeros = count_zeros(eps);
  if (zeros > 0) {
    shaken = jittered(input, cfg);
    pts = &shaken;
    index = std::make_unique<NeighborIndex>(*pts);
    eps = kth_distances(*index, cfg.k);
    zeros = count_zeros(eps);
    check_zero_fraction(zeros, eps.size());
  }
  double log_sum = 0.0;
  for (double e : eps) {
    if (e > 0.0) log_sum += std::log(2.0 * e);
  }
  const std::size_t used = eps.size() - zeros;
  return digamma(pts->size()) - digamma(cfg.k) +
         static_cast<double>(pts->dim) * log_sum / static_cast<double>(used);
}

EmbeddedPointSet columns(const EmbeddedPointSet& joint, std::size_t first, std::size_t count) {
  std::vector<double> coords(joint.size() * count);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    for (std::size_t j = 0; j < count; ++j) coords[i * count + j] = joint.coords[i * joint.dim + first + j];
  }
  return EmbeddedPointSet(count, std::move(coords));
}

// KSG algorithm 1 over a joint cloud whose first `dim_y` columns form y and
// the remaining ones form x.
double ksg_joint(const EmbeddedPointSet& input, std::size_t dim_y, const EstimatorConfig& cfg) {
  cfg.validate(input.size());
  const EmbeddedPointSet* joint = &input;
  EmbeddedPointSet shaken;
  auto index = std::make_unique<NeighborIndex>(*joint);
  std::vector<double> eps = kth_distances(*index, cfg.k);
  if (count_zeros(eps) > 0) {
    shaken = jittered(input, cfg);
    joint = &shaken;
    index = std::make_unique<NeighborIndex>(*joint);
    eps = kth_distances(*index, cfg.k);
    check_zero_fraction(count_zeros(eps), eps.size());
  }
  index.reset();

  const EmbeddedPointSet y = columns(*joint, 0, dim_y);
  const EmbeddedPointSet x = columns(*joint, dim_y, joint->dim - dim_y);
  const NeighborIndex index_y(y);
  const NeighborIndex index_x(x);

  double marginal_sum = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const std::size_t nx = index_x.count_within(i, eps[i]);
    const std::size_t ny = index_y.count_within(i, eps[i]);
    marginal_sum += digamma(nx + 1) + digamma(ny + 1);
  }
  return digamma(cfg.k) + digamma(joint->size()) - marginal_sum / static_cast<double>(eps.size());
}

using Segments = std::vector<std::span<const double>>;

// Single segments are embedded as they are; several segments are each rebased
// to start at 0 and their points pooled.
EmbeddedPointSet embed_segments(const Segments& segs, const EmbeddingSpec& spec, std::size_t stride) {
  if (segs.size() == 1) return takens_embed(segs.front(), spec, stride);
  std::vector<double> coords;
  for (const auto& seg : segs) {
    std::vector<double> rebased(seg.begin(), seg.end());
    const double origin = rebased.front();
    for (double& v : rebased) v -= origin;
    const EmbeddedPointSet part = takens_embed(rebased, spec, stride);
    coords.insert(coords.end(), part.coords.begin(), part.coords.end());
  }
  return EmbeddedPointSet(spec.m, std::move(coords), spec);
}

std::size_t stride_for(std::size_t tau, const EstimatorConfig& cfg) {
  return cfg.sampling == PointSampling::kEveryTau ? tau : 1;
}

double entropy_of(const Segments& segs, std::size_t m, std::size_t tau, const EstimatorConfig& cfg) {
  return kl_entropy(embed_segments(segs, {m, tau}, stride_for(tau, cfg)), cfg);
}

double ami_of(const Segments& segs, std::size_t m, std::size_t n, std::size_t tau, const EstimatorConfig& cfg) {
  if (m < 1 || n < 1) throw DomainError("auto-mutual information needs m >= 1 and n >= 1");
  // (x_t, ..., x_{t-(n-1)tau} | x_{t-n tau}, ..., x_{t-(n+m-1)tau}): y first, x after.
  return ksg_joint(embed_segments(segs, {m + n, tau}, stride_for(tau, cfg)), n, cfg);
}

double rate_of(const Segments& segs, std::size_t m, std::size_t tau, const EstimatorConfig& cfg) {
  // The m = 1 entropy is taken on the same sampling grid as the AMI.
  return entropy_of(segs, 1, tau, cfg) - ami_of(segs, m, 1, tau, cfg);
}

double rate_difference_of(const Segments& segs, std::size_t m, std::size_t tau, const EstimatorConfig& cfg) {
  return entropy_of(segs, m + 1, tau, cfg) - entropy_of(segs, m, tau, cfg);
}

double log_increment_std(const Segments& segs, std::size_t tau) {
  if (segs.size() == 1) return std::log(increment_std(segs.front(), tau));
  std::vector<double> increments;
  for (const auto& seg : segs) {
    if (tau >= seg.size()) throw LengthError("increment size exceeds window length");
    for (std::size_t t = tau; t < seg.size(); ++t) increments.push_back(seg[t] - seg[t - tau]);
  }
  const double sd = population_std(increments);
  if (!(sd > 0.0)) throw DegeneracyError("pooled increments are constant");
  return std::log(sd);
}

double quantity_value(Quantity q, const Segments& segs, std::size_t m, std::size_t n, std::size_t tau,
                      const EstimatorConfig& cfg) {
  switch (q) {
    case Quantity::kEntropy: return entropy_of(segs, m, tau, cfg);
    case Quantity::kAmi: return ami_of(segs, m, n, tau, cfg);
    case Quantity::kEntropyRate: return rate_of(segs, m, tau, cfg);
    case Quantity::kEntropyRateNormalized: return rate_of(segs, m, tau, cfg) - log_increment_std(segs, tau);
    case Quantity::kEntropyRateDifference: return rate_difference_of(segs, m, tau, cfg);
  }
  throw DomainError("unknown quantity");
}

InfoEstimate make_estimate(Quantity q, double value, std::size_t m, std::size_t n, std::size_t tau, std::size_t T,
                           const EstimatorConfig& cfg, std::uint64_t seed) {
  InfoEstimate e;
  e.value = value;
  e.quantity = q;
  e.m = m;
  e.n = q == Quantity::kAmi ? n : (q == Quantity::kEntropy ? 0 : 1);
  e.tau = tau;
  e.T = T;
  e.k = cfg.k;
  e.seed = seed;
  return e;
}

}  // namespace

InfoEstimate entropy_knn(const EmbeddedPointSet& pts, const EstimatorConfig& cfg) {
  return make_estimate(Quantity::kEntropy, kl_entropy(pts, cfg), pts.dim, 0, pts.spec.tau, pts.size(), cfg,
                       cfg.jitter_seed);
}

InfoEstimate mutual_information_ksg(const EmbeddedPointSet& x, const EmbeddedPointSet& y, const EstimatorConfig& cfg) {
  if (x.size() != y.size()) throw LengthError("KSG needs x and y with the same number of points");
  if (x.dim == y.dim && x.coords == y.coords) {
    throw DegeneracyError("y is an exact copy of x: mutual information diverges");
  }
  std::vector<double> coords(x.size() * (x.dim + y.dim));
  const std::size_t dim = x.dim + y.dim;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::copy_n(y.coords.begin() + static_cast<std::ptrdiff_t>(i * y.dim), y.dim,
                coords.begin() + static_cast<std::ptrdiff_t>(i * dim));
    std::copy_n(x.coords.begin() + static_cast<std::ptrdiff_t>(i * x.dim), x.dim,
                coords.begin() + static_cast<std::ptrdiff_t>(i * dim + y.dim));
  }
  const double value = ksg_joint(EmbeddedPointSet(dim, std::move(coords)), y.dim, cfg);
  return make_estimate(Quantity::kAmi, value, x.dim, y.dim, x.spec.tau, x.size(), cfg, cfg.jitter_seed);
}

InfoEstimate estimate_quantity(Quantity q, std::span<const double> series, std::size_t m, std::size_t n,
                               std::size_t tau, const EstimatorConfig& cfg, std::uint64_t seed) {
  const Segments segs{series};
  return make_estimate(q, quantity_value(q, segs, m, n, tau, cfg), m, n, tau, series.size(), cfg, seed);
}

InfoEstimate ersatz_entropy(std::span<const double> series, std::size_t m, std::size_t tau,
                            const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_quantity(Quantity::kEntropy, series, m, 0, tau, cfg, seed);
}

InfoEstimate ersatz_ami(std::span<const double> series, std::size_t m, std::size_t n, std::size_t tau,
                        const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_quantity(Quantity::kAmi, series, m, n, tau, cfg, seed);
}

InfoEstimate ersatz_entropy_rate(std::span<const double> series, std::size_t m, std::size_t tau,
                                 const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_quantity(Quantity::kEntropyRate, series, m, 1, tau, cfg, seed);
}

InfoEstimate ersatz_entropy_rate_difference(std::span<const double> series, std::size_t m, std::size_t tau,
                                            const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_quantity(Quantity::kEntropyRateDifference, series, m, 1, tau, cfg, seed);
}

InfoEstimate normalized_entropy_rate(std::span<const double> series, std::size_t m, std::size_t tau,
                                     const EstimatorConfig& cfg, std::uint64_t seed) {
  return estimate_quantity(Quantity::kEntropyRateNormalized, series, m, 1, tau, cfg, seed);
}

InfoEstimate ersatz_entropy(const Trajectory& traj, std::size_t m, std::size_t tau, const EstimatorConfig& cfg) {
  return ersatz_entropy(traj.samples, m, tau, cfg, traj.spec.seed);
}

InfoEstimate ersatz_ami(const Trajectory& traj, std::size_t m, std::size_t n, std::size_t tau,
                        const EstimatorConfig& cfg) {
  return ersatz_ami(traj.samples, m, n, tau, cfg, traj.spec.seed);
}

InfoEstimate ersatz_entropy_rate(const Trajectory& traj, std::size_t m, std::size_t tau, const EstimatorConfig& cfg) {
  return ersatz_entropy_rate(traj.samples, m, tau, cfg, traj.spec.seed);
}

InfoEstimate normalized_entropy_rate(const Trajectory& traj, std::size_t m, std::size_t tau,
                                     const EstimatorConfig& cfg) {
  return normalized_entropy_rate(traj.samples, m, tau, cfg, traj.spec.seed);
}

InfoEstimate windowed_estimate(Quantity q, std::span<const double> series, std::size_t window, WindowMode mode,
                               std::size_t m, std::size_t n, std::size_t tau, const EstimatorConfig& cfg,
                               std::uint64_t seed) {
  if (window == 0 || window > series.size()) {
    throw LengthError("window of " + std::to_string(window) + " samples does not fit in " +
                      std::to_string(series.size()));
  }
  const std::size_t windows = series.size() / window;
  Segments segs;
  for (std::size_t w = 0; w < windows; ++w) segs.push_back(series.subspan(w * window, window));

  double value = 0.0;
  if (mode == WindowMode::kPool) {
    value = quantity_value(q, segs, m, n, tau, cfg);
  } else {
    for (const auto& seg : segs) value += quantity_value(q, Segments{seg}, m, n, tau, cfg);
    value /= static_cast<double>(windows);
  }
  return make_estimate(q, value, m, n, tau, window, cfg, seed);
}

}  // namespace ersatz
