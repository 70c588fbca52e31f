#include "ersatz/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ersatz/embedding.hpp"
#include "ersatz/errors.hpp"
#include "ersatz/io.hpp"
#include "ersatz/oracles.hpp"
#include "ersatz/parallel.hpp"
#include "ersatz/rng.hpp"
#include "ersatz/synthesis.hpp"

namespace ersatz {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) { return io::format_double(v); }

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  return out;
}

std::string process_echo_header() { return "base_seed,hurst,sigma1,c2,integral_scale,lognormal_mu,lognormal_sigma"; }

std::string process_echo(const NoiseSpec& p, std::uint64_t base_seed) {
  std::ostringstream os;
  os << base_seed << ',' << fmt(p.hurst) << ',' << fmt(p.sigma1) << ',' << fmt(p.c2) << ','
     << p.effective_integral_scale() << ',' << fmt(p.lognormal_mu) << ',' << fmt(p.lognormal_sigma);
  return os.str();
}

Trajectory realize(const NoiseSynthesizer& synth, Role role, std::uint64_t seed) {
  return role == Role::kMotion ? synth.motion(seed) : synth.noise(seed);
}

NoiseSpec with_length(NoiseSpec spec, std::size_t length) {
  spec.length = length;
  return spec;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kWindowT: return "window_T";
    case SweepAxis::kScaleTau: return "scale_tau";
    case SweepAxis::kNeighborsK: return "neighbors_k";
    case SweepAxis::kEmbeddingM: return "embedding_m";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) {
  for (SweepAxis a : {SweepAxis::kWindowT, SweepAxis::kScaleTau, SweepAxis::kNeighborsK, SweepAxis::kEmbeddingM}) {
    if (text == to_string(a)) return a;
  }
  return std::nullopt;
}

std::size_t SweepPlan::window_for(std::size_t grid_value) const {
  if (axis == SweepAxis::kWindowT) return grid_value;
  return window == 0 ? process.length : window;
}

namespace {

QuantityRequest override_request(const SweepPlan& plan, const QuantityRequest& q, std::size_t value) {
  QuantityRequest out = q;
  if (plan.axis == SweepAxis::kScaleTau) out.tau = value;
  if (plan.axis == SweepAxis::kEmbeddingM) out.m = value;
  return out;
}

std::size_t k_for(const SweepPlan& plan, std::size_t value) {
  return plan.axis == SweepAxis::kNeighborsK ? value : plan.estimator.k;
}

std::size_t points_needed(const QuantityRequest& q) {
  switch (q.quantity) {
    case Quantity::kEntropy: return q.m;
    case Quantity::kAmi: return q.m + q.n;
    case Quantity::kEntropyRateDifference: return q.m + 1;
    default: return q.m + 1;
  }
}

std::string grid_label(const SweepPlan& plan, std::size_t value) {
  return std::string(to_string(plan.axis)) + "=" + std::to_string(value);
}

}  // namespace

void SweepPlan::validate() const {
  process.validate();
  if (grid.empty()) throw DomainError("sweep grid is empty");
  if (realizations < 1) throw DomainError("realizations must be >= 1");
  if (quantities.empty()) throw DomainError("sweep requests no quantity");
  if (axis != SweepAxis::kWindowT && window > process.length) {
    throw LengthError("window " + std::to_string(window) + " exceeds process length " + std::to_string(process.length));
  }
  for (std::size_t value : grid) {
    const std::size_t T = window_for(value);
    if (axis == SweepAxis::kWindowT) {
      try {
        with_length(process, T).validate();
      } catch (const Error& e) {
        rethrow_with_context(e, grid_label(*this, value));
      }
    } else if (T > process.length) {
      throw LengthError(grid_label(*this, value) + ": window exceeds process length " + std::to_string(process.length));
    }
    for (const auto& q0 : quantities) {
      const QuantityRequest q = override_request(*this, q0, value);
      if (q.m < 1 || q.tau < 1 || (q.quantity == Quantity::kAmi && q.n < 1)) {
        throw DomainError(grid_label(*this, value) + ": m, n and tau must be >= 1");
      }
      const std::size_t span = (points_needed(q) - 1) * q.tau;
      if (span >= T) {
        throw LengthError(grid_label(*this, value) + ": embedding span " + std::to_string(span) +
                          " does not fit in window " + std::to_string(T));
      }
      const std::size_t stride = estimator.sampling == PointSampling::kEveryTau ? q.tau : 1;
      const std::size_t points = (T - span - 1) / stride + 1;
      const std::size_t k = k_for(*this, value);
      if (k < 1 || k >= points) {
        throw DomainError(grid_label(*this, value) + ": k=" + std::to_string(k) + " needs more than " +
                          std::to_string(points) + " points");
      }
    }
  }
}

namespace {

// Window sweeps draw one realization of length T per grid point, as every
// realization is centered and normalized over its own length. Other axes
// share one realization of the plan length across the grid.
std::vector<NoiseSynthesizer> synthesizers_for(const SweepPlan& plan) {
  std::vector<NoiseSynthesizer> out;
  if (plan.axis == SweepAxis::kWindowT) {
    for (std::size_t T : plan.grid) out.emplace_back(with_length(plan.process, T));
  } else {
    out.emplace_back(plan.process);
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  const auto start = Clock::now();
  const std::vector<NoiseSynthesizer> synths = synthesizers_for(plan);
  const std::size_t G = plan.grid.size();
  const std::size_t Q = plan.quantities.size();
  const std::size_t R = plan.realizations;
  std::vector<std::vector<double>> values(R, std::vector<double>(G * Q));

  parallel_for(R, plan.threads, [&](std::size_t r) {
    const std::uint64_t seed = realization_seed(plan.base_seed, r);
    std::optional<Trajectory> shared;
    if (synths.size() == 1) shared = realize(synths.front(), plan.role, seed);
    for (std::size_t g = 0; g < G; ++g) {
      const std::size_t value = plan.grid[g];
      const Trajectory traj = shared ? Trajectory{} : realize(synths[g], plan.role, seed);
      const std::span<const double> series =
          std::span<const double>(shared ? shared->samples : traj.samples).first(plan.window_for(value));
      EstimatorConfig cfg = plan.estimator;
      cfg.k = k_for(plan, value);
      cfg.jitter_seed = seed;
      for (std::size_t q = 0; q < Q; ++q) {
        const QuantityRequest req = override_request(plan, plan.quantities[q], value);
        try {
          values[r][g * Q + q] = estimate_quantity(req.quantity, series, req.m, req.n, req.tau, cfg, seed).value;
        } catch (const Error& e) {
          rethrow_with_context(e, grid_label(plan, value) + ", realization " + std::to_string(r));
        }
      }
    }
  });

  SweepResult result;
  result.plan = plan;
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t q = 0; q < Q; ++q) {
      SweepRow row;
      row.axis_value = plan.grid[g];
      row.request = override_request(plan, plan.quantities[q], plan.grid[g]);
      row.T = plan.window_for(plan.grid[g]);
      row.k = k_for(plan, plan.grid[g]);
      row.realizations = R;
      row.values.reserve(R);
      for (std::size_t r = 0; r < R; ++r) row.values.push_back(values[r][g * Q + q]);
      row.mean = mean(row.values);
      row.std = sample_std(row.values);
      result.rows.push_back(std::move(row));
    }
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

std::vector<const SweepRow*> series_of(const SweepResult& result, std::size_t q) {
  const std::size_t Q = result.plan.quantities.size();
  if (q >= Q) throw DomainError("quantity index out of range");
  std::vector<const SweepRow*> rows;
  for (std::size_t i = q; i < result.rows.size(); i += Q) rows.push_back(&result.rows[i]);
  return rows;
}

LinearFit fit_series(const std::vector<const SweepRow*>& rows, std::size_t exclude_largest) {
  std::vector<const SweepRow*> sorted = rows;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SweepRow* a, const SweepRow* b) { return a->axis_value < b->axis_value; });
  if (exclude_largest >= sorted.size() || sorted.size() - exclude_largest < 2) {
    throw DomainError("slope fit needs at least two points after exclusions");
  }
  sorted.resize(sorted.size() - exclude_largest);
  std::vector<double> x, y, sigma;
  for (const SweepRow* row : sorted) {
    x.push_back(std::log(static_cast<double>(row->axis_value)));
    y.push_back(row->mean);
    sigma.push_back(row->std / std::sqrt(static_cast<double>(row->realizations)));
  }
  return fit_line(x, y, sigma);
}

double rate_reference(const NoiseSpec& process, std::size_t tau, std::size_t T) {
  switch (process.kind) {
    case NoiseKind::kFgn:
      return oracles::fbm_ersatz_rate_pred(static_cast<double>(tau), static_cast<double>(T), process.hurst,
                                           process.sigma1);
    case NoiseKind::kLognormalH1:
    case NoiseKind::kLognormalH2:
      if (tau != 1) throw DomainError("log-normal entropy rate reference is only known at tau = 1");
      return oracles::lognormal_unit_entropy(process.lognormal_mu, process.lognormal_sigma);
    case NoiseKind::kMrw: break;
  }
  throw DomainError("no closed-form entropy rate reference for " + std::string(to_string(process.kind)));
}

BiasGridResult bias_grid(const NoiseSpec& process, const std::vector<std::size_t>& k_grid,
                         const std::vector<std::size_t>& T_grid, std::size_t m, std::size_t tau,
                         std::size_t realizations, std::uint64_t base_seed, std::size_t threads) {
  if (k_grid.empty() || T_grid.empty()) throw DomainError("bias grid needs non-empty k and T grids");
  const std::size_t max_T = *std::max_element(T_grid.begin(), T_grid.end());
  SweepPlan plan;
  plan.process = with_length(process, max_T);
  plan.axis = SweepAxis::kNeighborsK;
  plan.grid = k_grid;
  plan.realizations = realizations;
  plan.base_seed = base_seed;
  plan.quantities = {{Quantity::kEntropyRate, m, 1, tau}};
  plan.threads = threads;

  const auto start = Clock::now();
  BiasGridResult result;
  result.process = plan.process;
  result.m = m;
  result.tau = tau;
  result.realizations = realizations;
  result.base_seed = base_seed;
  result.reference = rate_reference(process, tau, max_T);

  // One realization of length T per window, shared by all k.
  const std::size_t K = k_grid.size();
  const std::size_t NT = T_grid.size();
  std::vector<NoiseSynthesizer> synths;
  for (std::size_t T : T_grid) {
    plan.window = T;
    plan.validate();
    synths.emplace_back(with_length(process, T));
  }
  std::vector<std::vector<double>> values(realizations, std::vector<double>(K * NT));
  parallel_for(realizations, threads, [&](std::size_t r) {
    const std::uint64_t seed = realization_seed(base_seed, r);
    for (std::size_t ti = 0; ti < NT; ++ti) {
      const Trajectory traj = synths[ti].motion(seed);
      for (std::size_t ki = 0; ki < K; ++ki) {
        EstimatorConfig cfg;
        cfg.k = k_grid[ki];
        cfg.jitter_seed = seed;
        try {
          values[r][ti * K + ki] = ersatz_entropy_rate(traj.samples, m, tau, cfg, seed).value;
        } catch (const Error& e) {
          rethrow_with_context(e, "T=" + std::to_string(T_grid[ti]) + ", k=" + std::to_string(k_grid[ki]));
        }
      }
    }
  });

  for (std::size_t ti = 0; ti < NT; ++ti) {
    const double reference = rate_reference(process, tau, T_grid[ti]);
    for (std::size_t ki = 0; ki < K; ++ki) {
      std::vector<double> cell(realizations);
      for (std::size_t r = 0; r < realizations; ++r) cell[r] = values[r][ti * K + ki];
      BiasPoint p;
      p.k = k_grid[ki];
      p.T = T_grid[ti];
      p.ratio = static_cast<double>(p.k) / std::pow(static_cast<double>(p.T), 1.0 / static_cast<double>(m + 1));
      p.mean = mean(cell);
      p.std = sample_std(cell);
      p.bias = p.mean - reference;
      result.points.push_back(p);
    }
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

SweepResult std_vs_T(const NoiseSpec& process, const std::vector<std::size_t>& T_grid, std::size_t realizations,
                     std::uint64_t base_seed, std::size_t tau, const EstimatorConfig& cfg, std::size_t threads) {
  if (T_grid.empty()) throw DomainError("T grid is empty");
  SweepPlan plan;
  plan.process = with_length(process, *std::max_element(T_grid.begin(), T_grid.end()));
  plan.axis = SweepAxis::kWindowT;
  plan.grid = T_grid;
  plan.realizations = realizations;
  plan.base_seed = base_seed;
  plan.estimator = cfg;
  plan.threads = threads;
  plan.quantities = {
      {Quantity::kEntropy, 1, 1, tau},
      {Quantity::kAmi, 1, 1, tau},
      {Quantity::kEntropyRate, 1, 1, tau},
  };
  return run_sweep(plan);
}

IncrementPdfResult increment_pdf(const NoiseSpec& process, const std::vector<std::size_t>& taus,
                                 std::size_t realizations, std::uint64_t base_seed, std::size_t threads) {
  process.validate();
  if (taus.empty()) throw DomainError("tau grid is empty");
  if (realizations < 1) throw DomainError("realizations must be >= 1");
  for (std::size_t tau : taus) {
    if (tau < 1 || tau >= process.length) throw LengthError("increment size " + std::to_string(tau) + " out of range");
  }
  const auto start = Clock::now();
  const NoiseSynthesizer synth(process);
  const std::size_t NT = taus.size();
  std::vector<std::vector<std::vector<double>>> per(realizations, std::vector<std::vector<double>>(NT));
  parallel_for(realizations, threads, [&](std::size_t r) {
    const Trajectory motion = synth.motion(realization_seed(base_seed, r));
    for (std::size_t i = 0; i < NT; ++i) {
      try {
        per[r][i] = standardize(increment_series(motion, taus[i]).samples);
      } catch (const Error& e) {
        rethrow_with_context(e, "tau=" + std::to_string(taus[i]));
      }
    }
  });

  std::vector<std::vector<double>> pooled(NT);
  for (std::size_t i = 0; i < NT; ++i) {
    for (std::size_t r = 0; r < realizations; ++r) pooled[i].insert(pooled[i].end(), per[r][i].begin(), per[r][i].end());
  }
  per.clear();

  std::vector<double> all;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& v : pooled) {
    all.insert(all.end(), v.begin(), v.end());
    lo = std::min(lo, *std::min_element(v.begin(), v.end()));
    hi = std::max(hi, *std::max_element(v.begin(), v.end()));
  }
  const double width = freedman_diaconis_width(all);
  all.clear();
  all.shrink_to_fit();
  constexpr std::size_t kMaxBins = 4096;
  std::size_t bins = width > 0.0 ? static_cast<std::size_t>(std::ceil((hi - lo) / width)) : 1;
  bins = std::clamp<std::size_t>(bins, 1, kMaxBins);

  IncrementPdfResult result;
  result.process = process;
  result.taus = taus;
  result.realizations = realizations;
  result.base_seed = base_seed;
  for (std::size_t i = 0; i < NT; ++i) {
    Histogram h = make_histogram(pooled[i], lo, hi, bins);
    if (i == 0) result.bins_template = Histogram{h.lower, h.width, {}};
    result.density.push_back(std::move(h.density));
    result.excess_kurtosis.push_back(excess_kurtosis(pooled[i]));
    result.ks_vs_first.push_back(ks_two_sample(pooled[i], pooled[0]));
    result.ks_critical.push_back(ks_critical_two_sample(pooled[i].size(), pooled[0].size()));
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

EnsembleResult ensemble_fixed_time(const NoiseSpec& process, const std::vector<std::size_t>& times, std::size_t m,
                                   std::size_t tau, std::size_t realizations, std::uint64_t base_seed,
                                   const EstimatorConfig& cfg, std::size_t threads) {
  if (times.empty()) throw DomainError("time list is empty");
  if (m < 1 || tau < 1) throw DomainError("m and tau must be >= 1");
  for (std::size_t t : times) {
    if (t <= (m - 1) * tau) {
      throw DomainError("t=" + std::to_string(t) + " must exceed (m-1)*tau so that no coordinate is x_0 = 0");
    }
  }
  cfg.validate(realizations);
  const auto start = Clock::now();
  const std::size_t max_t = *std::max_element(times.begin(), times.end());
  const NoiseSpec spec = with_length(process, next_power_of_two(max_t));
  const NoiseSynthesizer synth(spec);
  const std::size_t NT = times.size();

  std::vector<std::vector<double>> coords(NT, std::vector<double>(realizations * m));
  parallel_for(realizations, threads, [&](std::size_t r) {
    // samples[i] holds x_{i+1}. Per-realization centering would pin the
    // motion at the last sample, so the theoretical moments are used.
    const Trajectory motion = synth.motion(realization_seed(base_seed, r), Normalization::kPopulation);
    for (std::size_t i = 0; i < NT; ++i) {
      for (std::size_t j = 0; j < m; ++j) coords[i][r * m + j] = motion.samples[times[i] - j * tau - 1];
    }
  });

  EnsembleResult result;
  result.process = spec;
  result.m = m;
  result.tau = tau;
  result.realizations = realizations;
  result.base_seed = base_seed;
  result.k = cfg.k;
  for (std::size_t i = 0; i < NT; ++i) {
    EstimatorConfig local = cfg;
    local.jitter_seed = base_seed;
    const EmbeddedPointSet pts(m, std::move(coords[i]), EmbeddingSpec{m, tau});
    result.points.push_back({times[i], entropy_knn(pts, local).value});
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

LinearFit fit_ensemble(const EnsembleResult& result) {
  std::vector<double> x, y;
  for (const auto& p : result.points) {
    x.push_back(std::log(static_cast<double>(p.t)));
    y.push_back(p.entropy);
  }
  return fit_line(x, y);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  const SweepPlan& plan = result.plan;
  const std::size_t Q = plan.quantities.size();
  std::vector<std::optional<LinearFit>> fits(Q);
  if (plan.axis == SweepAxis::kWindowT || plan.axis == SweepAxis::kScaleTau) {
    for (std::size_t q = 0; q < Q; ++q) {
      const auto rows = series_of(result, q);
      if (rows.size() >= plan.fit_exclude_largest + 2) fits[q] = fit_series(rows, plan.fit_exclude_largest);
    }
  }

  auto out = open_csv(path);
  out << "process,role,axis,axis_value,quantity,m,n,tau,T,k,mean,std,realizations," << process_echo_header()
      << ",ols_slope,ols_slope_err\n";
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SweepRow& row = result.rows[i];
    const auto& fit = fits[i % Q];
    out << to_string(plan.process.kind) << ',' << to_string(plan.role) << ',' << to_string(plan.axis) << ','
        << row.axis_value << ',' << to_string(row.request.quantity) << ',' << row.request.m << ','
        << (row.request.quantity == Quantity::kAmi ? row.request.n : 1) << ',' << row.request.tau << ',' << row.T
        << ',' << row.k << ',' << fmt(row.mean) << ',' << fmt(row.std) << ',' << row.realizations << ','
        << process_echo(plan.process, plan.base_seed) << ',' << (fit ? fmt(fit->slope) : "") << ','
        << (fit ? fmt(fit->slope_error) : "") << '\n';
  }
}

void write_bias_csv(const std::filesystem::path& path, const BiasGridResult& result) {
  auto out = open_csv(path);
  out << "process,quantity,m,tau,k,T,ratio,mean,std,reference,bias,realizations," << process_echo_header() << '\n';
  for (const auto& p : result.points) {
    out << to_string(result.process.kind) << ",rate," << result.m << ',' << result.tau << ',' << p.k << ',' << p.T
        << ',' << fmt(p.ratio) << ',' << fmt(p.mean) << ',' << fmt(p.std) << ',' << fmt(p.mean - p.bias) << ','
        << fmt(p.bias) << ',' << result.realizations << ',' << process_echo(result.process, result.base_seed)
        << '\n';
  }
}

void write_increment_pdf_csv(const std::filesystem::path& path, const IncrementPdfResult& result) {
  auto out = open_csv(path);
  out << "process,tau,bin_lower,bin_center,density,realizations,length," << process_echo_header() << '\n';
  const double w = result.bins_template.width;
  for (std::size_t i = 0; i < result.taus.size(); ++i) {
    for (std::size_t b = 0; b < result.density[i].size(); ++b) {
      const double lower = result.bins_template.lower + static_cast<double>(b) * w;
      out << to_string(result.process.kind) << ',' << result.taus[i] << ',' << fmt(lower) << ','
          << fmt(lower + 0.5 * w) << ',' << fmt(result.density[i][b]) << ',' << result.realizations << ','
          << result.process.length << ',' << process_echo(result.process, result.base_seed) << '\n';
    }
  }
}

void write_increment_stats_csv(const std::filesystem::path& path, const IncrementPdfResult& result) {
  auto out = open_csv(path);
  out << "process,tau,excess_kurtosis,ks_vs_first,ks_critical_1pct,realizations,length," << process_echo_header()
      << '\n';
  for (std::size_t i = 0; i < result.taus.size(); ++i) {
    out << to_string(result.process.kind) << ',' << result.taus[i] << ',' << fmt(result.excess_kurtosis[i]) << ','
        << fmt(result.ks_vs_first[i]) << ',' << fmt(result.ks_critical[i]) << ',' << result.realizations << ','
        << result.process.length << ',' << process_echo(result.process, result.base_seed) << '\n';
  }
}

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleResult& result) {
  const LinearFit fit = fit_ensemble(result);
  auto out = open_csv(path);
  out << "process,quantity,t,m,tau,k,entropy,predicted_offset,realizations," << process_echo_header()
      << ",ols_slope,ols_slope_err\n";
  for (const auto& p : result.points) {
    out << to_string(result.process.kind) << ",ensemble_entropy," << p.t << ',' << result.m << ',' << result.tau
        << ',' << result.k << ',' << fmt(p.entropy) << ','
        << fmt(oracles::selfsimilar_entropy_pred(static_cast<double>(p.t), static_cast<double>(result.tau), result.m,
                                                 result.process.hurst))
        << ',' << result.realizations << ',' << process_echo(result.process, result.base_seed) << ','
        << fmt(fit.slope) << ',' << fmt(fit.slope_error) << '\n';
  }
}

nlohmann::json to_json(const SweepPlan& plan) {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& r : plan.quantities) {
    q.push_back({{"quantity", std::string(to_string(r.quantity))}, {"m", r.m}, {"n", r.n}, {"tau", r.tau}});
  }
  return {{"process", io::to_json(plan.process)},
          {"role", std::string(to_string(plan.role))},
          {"axis", std::string(to_string(plan.axis))},
          {"grid", plan.grid},
          {"realizations", plan.realizations},
          {"base_seed", plan.base_seed},
          {"k", plan.estimator.k},
          {"duplicate_jitter", plan.estimator.duplicate_jitter},
          {"window", plan.window_for(plan.grid.empty() ? 0 : plan.grid.front())},
          {"quantities", q},
          {"fit_exclude_largest", plan.fit_exclude_largest}};
}

}  // namespace ersatz
