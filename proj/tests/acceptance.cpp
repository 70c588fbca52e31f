// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ersatz/embedding.hpp"
#include "ersatz/estimators.hpp"
#include "ersatz/experiments.hpp"
#include "ersatz/oracles.hpp"
#include "ersatz/rng.hpp"
#include "ersatz/stats.hpp"
#include "ersatz/synthesis.hpp"

using namespace ersatz;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    char mark = cond ? '+' : '!';
    detail += std::string("    ") + mark + " " + what + "\n";
    ok = ok && cond;
  }
};

std::string f(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

NoiseSpec fbm(double hurst, std::size_t length) {
  NoiseSpec s;
  s.kind = NoiseKind::kFgn;
  s.hurst = hurst;
  s.length = length;
  return s;
}

NoiseSpec lognormal(NoiseKind kind, std::size_t length) {
  NoiseSpec s;
  s.kind = kind;
  s.hurst = 0.7;
  s.length = length;
  return s;
}

NoiseSpec mrw(std::size_t length) {
  NoiseSpec s;
  s.kind = NoiseKind::kMrw;
  s.hurst = 0.7;
  s.c2 = 0.025;
  s.length = length;
  return s;
}

std::vector<std::size_t> pow2(int lo, int hi) {
  std::vector<std::size_t> v;
  for (int e = lo; e <= hi; ++e) v.push_back(std::size_t{1} << e);
  return v;
}

// Sub-ensemble of the first R realizations of a row.
SweepRow truncated(const SweepRow& row, std::size_t R) {
  SweepRow out = row;
  out.values.resize(std::min(R, row.values.size()));
  out.realizations = out.values.size();
  out.mean = mean(out.values);
  out.std = sample_std(out.values);
  return out;
}

std::vector<const SweepRow*> ptrs(const std::vector<SweepRow>& rows) {
  std::vector<const SweepRow*> p;
  for (const auto& r : rows) p.push_back(&r);
  return p;
}

std::vector<SweepRow> series(const SweepResult& res, std::size_t q, std::size_t R) {
  std::vector<SweepRow> out;
  for (const SweepRow* row : series_of(res, q)) out.push_back(truncated(*row, R));
  return out;
}

double spread(const std::vector<SweepRow>& rows) {
  double lo = rows.front().mean, hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.mean);
    hi = std::max(hi, r.mean);
  }
  return hi - lo;
}

std::string list_means(const std::vector<SweepRow>& rows) {
  std::string s;
  for (const auto& r : rows) s += f("%.3f ", r.mean);
  return s;
}

// Shared ensembles, computed on first use.
struct Shared {
  std::optional<SweepResult> fbm_T;    // H=0.7 over T: entropy, ami, rate (R=100)
  std::optional<SweepResult> fbm_tau;  // H=0.7 over tau at T=2^16
  std::optional<SweepResult> h1_tau, h2_tau, mrw_tau;

  const SweepResult& fbm_window() {
    if (!fbm_T) {
      SweepPlan p;
      p.process = fbm(0.7, std::size_t{1} << 16);
      p.axis = SweepAxis::kWindowT;
      p.grid = pow2(10, 16);
      p.realizations = 100;
      p.quantities = {{Quantity::kEntropy, 1, 1, 1}, {Quantity::kAmi, 1, 1, 1}, {Quantity::kEntropyRate, 1, 1, 1}};
      fbm_T = run_sweep(p);
    }
    return *fbm_T;
  }

  static SweepResult tau_sweep(const NoiseSpec& spec, std::vector<QuantityRequest> q) {
    SweepPlan p;
    p.process = spec;
    p.axis = SweepAxis::kScaleTau;
    p.grid = pow2(0, 6);
    p.realizations = 20;
    p.quantities = std::move(q);
    return run_sweep(p);
  }

  const SweepResult& fbm_scale() {
    if (!fbm_tau) {
      fbm_tau = tau_sweep(fbm(0.7, std::size_t{1} << 16), {{Quantity::kAmi, 1, 1, 1},
                                                            {Quantity::kAmi, 2, 1, 1},
                                                            {Quantity::kEntropyRate, 1, 1, 1},
                                                            {Quantity::kEntropyRateNormalized, 1, 1, 1}});
    }
    return *fbm_tau;
  }

  const SweepResult& lognormal_scale(NoiseKind kind) {
    auto& slot = kind == NoiseKind::kLognormalH1 ? h1_tau : h2_tau;
    if (!slot) slot = tau_sweep(lognormal(kind, std::size_t{1} << 16), {{Quantity::kEntropyRateNormalized, 1, 1, 1}});
    return *slot;
  }

  const SweepResult& mrw_scale() {
    if (!mrw_tau) {
      mrw_tau = tau_sweep(mrw(std::size_t{1} << 16),
                          {{Quantity::kEntropyRate, 1, 1, 1}, {Quantity::kEntropyRateNormalized, 1, 1, 1}});
    }
    return *mrw_tau;
  }
};

Shared shared;

constexpr std::size_t kFitExclude = 2;  // largest tau points left out of scale fits

Check c1_calibration() {
  Check c;
  const std::size_t N = 100000;
  Philox4x32 rng(2024, 0);
  std::vector<double> x(N), y(N), z(N), u(N);
  for (std::size_t i = 0; i < N; ++i) {
    x[i] = rng.normal();
    z[i] = rng.normal();
    u[i] = rng.normal();
  }
  const double rho = 0.9;
  for (std::size_t i = 0; i < N; ++i) y[i] = rho * x[i] + std::sqrt(1.0 - rho * rho) * z[i];
  EstimatorConfig cfg;
  const EmbeddedPointSet px(1, x), py(1, y), pu(1, u);
  const double h = entropy_knn(px, cfg).value;
  const double mi = mutual_information_ksg(px, py, cfg).value;
  const double mi0 = mutual_information_ksg(px, pu, cfg).value;
  const double h_ref = 0.5 * std::log(2.0 * M_PI * M_E);
  const double mi_ref = -0.5 * std::log(1.0 - rho * rho);
  c.require(std::abs(h - h_ref) <= 0.01, f("KL entropy %.4f vs %.4f (tol 0.01)", h, h_ref));
  c.require(std::abs(mi - mi_ref) <= 0.02, f("KSG MI rho=0.9 %.4f vs %.4f (tol 0.02)", mi, mi_ref));
  c.require(std::abs(mi0) <= 0.01, f("KSG MI independent %.4f (tol 0.01)", mi0));
  return c;
}

Check c2_entropy_growth() {
  Check c;
  const auto rows = series(shared.fbm_window(), 0, 20);
  const LinearFit fit = fit_series(ptrs(rows));
  c.require(std::abs(fit.slope - 0.7) <= 0.05, f("slope of H(T) vs ln T = %.4f +- %.4f (target 0.70 +- 0.05)", fit.slope,
                                                 fit.slope_error));
  c.detail += "      means: " + list_means(rows) + "\n";
  return c;
}

Check c3_ami_scale() {
  Check c;
  const auto& res = shared.fbm_scale();
  for (std::size_t q = 0; q < 2; ++q) {
    const auto rows = series(res, q, 20);
    const LinearFit fit = fit_series(ptrs(rows), kFitExclude);
    const LinearFit all = fit_series(ptrs(rows), 0);
    c.require(std::abs(fit.slope + 0.7) <= 0.05,
              f("m=%.0f: slope of I vs ln tau = %.4f +- %.4f (all points: %.4f)", static_cast<double>(q + 1), fit.slope,
                fit.slope_error, all.slope));
    c.detail += "      means: " + list_means(rows) + "\n";
  }
  return c;
}

Check c4_rate_level() {
  Check c;
  const auto rows = series(shared.fbm_window(), 2, 20);
  const double var = spread(rows);
  const double last = rows.back().mean;
  c.require(var < 0.1, f("h(T) spread over T = %.4f nats (< 0.1)", var));
  c.require(std::abs(last - 1.419) <= 0.05, f("h at T=2^16 = %.4f (1.419 +- 0.05)", last));
  c.detail += "      means: " + list_means(rows) + "\n";
  const auto tau_rows = series(shared.fbm_scale(), 2, 20);
  const LinearFit fit = fit_series(ptrs(tau_rows), kFitExclude);
  const LinearFit all = fit_series(ptrs(tau_rows), 0);
  c.require(std::abs(fit.slope - 0.7) <= 0.03,
            f("slope of h vs ln tau = %.4f +- %.4f (all points: %.4f)", fit.slope, fit.slope_error, all.slope));
  c.detail += "      means: " + list_means(tau_rows) + "\n";
  return c;
}

Check c5_correction() {
  Check c;
  double worst = 0.0;
  for (double x : {1e-3, 5e-4, 2e-4, 1e-4, 1e-5, 1e-6}) {
    const double exact = oracles::correction_term(x, 0.7);
    const double first = oracles::correction_term_first_order(x, 0.7);
    worst = std::max(worst, std::abs(exact / first - 1.0));
  }
  c.require(worst <= 0.05, f("max relative gap to first order for tau/T <= 1e-3: %.5f (<= 0.05)", worst));
  const double bound = std::abs(oracles::correction_term(64.0 / 65536.0, 0.7));
  c.require(bound <= 2e-3, f("|C| at tau=2^6, T=2^16: %.3e (<= 2e-3)", bound));
  return c;
}

Check c6_increment_invariance() {
  Check c;
  for (std::size_t m = 1; m <= 8; ++m) {
    const double det = increment_matrix_determinant(m);
    c.require(std::abs(det) == 1.0, f("|det Q^%.0f| = %.17g", static_cast<double>(m), std::abs(det)));
  }
  const std::size_t T = std::size_t{1} << 14;
  const std::size_t R = 20;
  const NoiseSynthesizer synth(fbm(0.7, T));
  for (std::size_t m : {2, 3}) {
    std::vector<double> before, after;
    for (std::size_t r = 0; r < R; ++r) {
      const Trajectory motion = synth.motion(realization_seed(1, r));
      const EmbeddedPointSet pts = takens_embed(motion, {m, 1});
      EstimatorConfig cfg;
      before.push_back(entropy_knn(pts, cfg).value);
      after.push_back(entropy_knn(increment_transform(pts), cfg).value);
    }
    const double diff = mean(before) - mean(after);
    const double combined = std::hypot(sample_std(before), sample_std(after));
    c.require(std::abs(diff) <= 2.0 * combined, f("m=%.0f: mean H %.4f vs %.4f, ", static_cast<double>(m),
                                                  mean(before), mean(after)) +
                                                    f("|diff| %.4f <= 2 x %.4f", std::abs(diff), combined));
  }
  return c;
}

// Non-monotone: |bias| averaged in ratio bins falls and rises by more than
// its noise along the ratio axis, e.g. an overshoot through zero.
Check c7_bias_collapse() {
  Check c;
  const auto k_grid = std::vector<std::size_t>{4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18};
  const auto T_grid = pow2(9, 15);
  for (NoiseKind kind : {NoiseKind::kFgn, NoiseKind::kLognormalH1, NoiseKind::kLognormalH2}) {
    const NoiseSpec spec = kind == NoiseKind::kFgn ? fbm(0.7, T_grid.back()) : lognormal(kind, T_grid.back());
    const BiasGridResult res = bias_grid(spec, k_grid, T_grid, 1, 1, 20, 1);
    auto pts = res.points;
    std::sort(pts.begin(), pts.end(), [](const BiasPoint& a, const BiasPoint& b) { return a.ratio < b.ratio; });
    const BiasPoint& smallest = pts.front();

    // log-spaced ratio bins
    const double lo = std::log(pts.front().ratio), hi = std::log(pts.back().ratio);
    const std::size_t B = 8;
    std::vector<double> sum(B, 0.0), sum_err(B, 0.0);
    std::vector<std::size_t> cnt(B, 0);
    for (const auto& p : pts) {
      const std::size_t b = std::min(B - 1, static_cast<std::size_t>((std::log(p.ratio) - lo) / (hi - lo) * B));
      sum[b] += p.bias;
      sum_err[b] += p.std * p.std / static_cast<double>(res.realizations);
      ++cnt[b];
    }
    std::vector<double> curve, err;
    std::string shape;
    for (std::size_t b = 0; b < B; ++b) {
      if (cnt[b] == 0) continue;
      const double b_mean = sum[b] / static_cast<double>(cnt[b]);
      curve.push_back(std::abs(b_mean));
      err.push_back(std::sqrt(sum_err[b]) / static_cast<double>(cnt[b]));
      shape += f("%.3f ", b_mean);
    }
    bool up = false, down = false;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      for (std::size_t j = i + 1; j < curve.size(); ++j) {
        const double noise = 2.0 * std::hypot(err[i], err[j]);
        if (curve[j] - curve[i] > noise) up = true;
        if (curve[i] - curve[j] > noise) down = true;
      }
    }
    const std::string name(to_string(kind));
    c.require(std::abs(smallest.bias) <= 0.05,
              name + f(": bias at smallest ratio %.4f (k=%.0f, T=%.0f) = %.4f", smallest.ratio,
                       static_cast<double>(smallest.k), static_cast<double>(smallest.T), smallest.bias));
    c.require(up && down, name + ": binned |bias| non-monotone, signed bias: " + shape);
  }
  return c;
}

Check c8_std_contrast() {
  Check c;
  const auto& res = shared.fbm_window();
  const char* names[] = {"H", "I", "h"};
  for (std::size_t q = 0; q < 3; ++q) {
    const auto rows = series(res, q, 100);
    std::vector<double> x, y;
    std::string stds;
    for (const auto& r : rows) {
      x.push_back(std::log(static_cast<double>(r.axis_value)));
      y.push_back(std::log(r.std));
      stds += f("%.4f ", r.std);
    }
    // Trend of ln std across the whole T range: the fitted ratio end/start.
    const LinearFit fit = fit_line(x, y);
    const double ratio = std::exp(fit.slope * (x.back() - x.front()));
    if (q == 2) {
      c.require(ratio < 1.0 && rows.back().std < rows.front().std,
                f("std(h) trend ratio 2^16/2^10 = %.3f (< 1)", ratio));
    } else {
      c.require(ratio >= 0.9, std::string("std(") + names[q] + f(") trend ratio 2^16/2^10 = %.3f (>= 0.9)", ratio));
    }
    c.detail += std::string("      std(") + names[q] + "): " + stds + "\n";
  }
  return c;
}

Check c9_self_similarity() {
  Check c;
  const auto fgn_rows = series(shared.fbm_scale(), 3, 20);
  const auto h2_rows = series(shared.lognormal_scale(NoiseKind::kLognormalH2), 0, 20);
  const auto h1_rows = series(shared.lognormal_scale(NoiseKind::kLognormalH1), 0, 20);
  c.require(spread(fgn_rows) <= 0.1, f("fBm normalized rate spread %.4f (<= 0.1)", spread(fgn_rows)));
  c.detail += "      fgn: " + list_means(fgn_rows) + "\n";
  c.require(spread(h2_rows) <= 0.1, f("even-Hermitian normalized rate spread %.4f (<= 0.1)", spread(h2_rows)));
  c.detail += "      h2:  " + list_means(h2_rows) + "\n";
  bool monotone = true;
  for (std::size_t i = 1; i < h1_rows.size(); ++i) {
    const double sem = std::hypot(h1_rows[i].std, h1_rows[i - 1].std) / std::sqrt(20.0);
    if (h1_rows[i].mean < h1_rows[i - 1].mean - 2.0 * sem) monotone = false;
  }
  const double drift = h1_rows.back().mean - h1_rows.front().mean;
  c.require(monotone && drift > 0.15, f("Hermitian normalized rate drift %.4f (> 0.15, monotone)", drift));
  c.detail += "      h1:  " + list_means(h1_rows) + "\n";
  return c;
}

Check c10_mrw() {
  Check c;
  const auto& res = shared.mrw_scale();
  const auto rate = series(res, 0, 20);
  const LinearFit fit = fit_series(ptrs(rate), kFitExclude);
  const LinearFit all = fit_series(ptrs(rate), 0);
  c.require(std::abs(fit.slope - 0.7) <= 0.05,
            f("MRW slope of h vs ln tau = %.4f +- %.4f (all points: %.4f)", fit.slope, fit.slope_error, all.slope));
  const auto norm = series(res, 1, 20);
  const auto h1 = series(shared.lognormal_scale(NoiseKind::kLognormalH1), 0, 20);
  const double mrw_drift = std::abs(norm.back().mean - norm.front().mean);
  const double h1_drift = std::abs(h1.back().mean - h1.front().mean);
  c.require(mrw_drift / h1_drift < 1.0,
            f("normalized-rate drift MRW %.4f / Hermitian %.4f = %.3f (< 1)", mrw_drift, h1_drift, mrw_drift / h1_drift));
  c.detail += "      mrw normalized: " + list_means(norm) + "\n";

  const IncrementPdfResult pdf = increment_pdf(mrw(std::size_t{1} << 16), pow2(0, 6), 20, 1);
  std::string kurt;
  bool decreasing = true;
  for (std::size_t i = 0; i < pdf.excess_kurtosis.size(); ++i) {
    kurt += f("%.3f ", pdf.excess_kurtosis[i]);
    if (i > 0 && pdf.excess_kurtosis[i] > pdf.excess_kurtosis[i - 1]) decreasing = false;
  }
  c.require(decreasing && pdf.excess_kurtosis.back() < pdf.excess_kurtosis.front(),
            "increment excess kurtosis decreases with tau: " + kurt);
  return c;
}

Check c11_framework() {
  Check c;
  for (double hurst : {0.5, 0.7}) {
    const EnsembleResult ens = ensemble_fixed_time(fbm(hurst, std::size_t{1} << 14), pow2(6, 14), 1, 1, 10000, 7);
    const LinearFit e = fit_ensemble(ens);

    std::vector<SweepRow> rows;
    if (hurst == 0.7) {
      rows = series(shared.fbm_window(), 0, 20);
    } else {
      SweepPlan p;
      p.process = fbm(hurst, std::size_t{1} << 16);
      p.axis = SweepAxis::kWindowT;
      p.grid = pow2(10, 16);
      p.realizations = 20;
      p.quantities = {{Quantity::kEntropy, 1, 1, 1}};
      rows = series(run_sweep(p), 0, 20);
    }
    const LinearFit t = fit_series(ptrs(rows));
    const double combined = std::hypot(e.slope_error, t.slope_error);
    c.require(std::abs(e.slope - t.slope) <= 2.0 * combined,
              f("H=%.1f: ensemble slope %.4f +- %.4f vs ersatz slope %.4f", hurst, e.slope, e.slope_error, t.slope) +
                  f(" +- %.4f (2 sigma combined %.4f)", t.slope_error, 2.0 * combined));
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"C1 estimator calibration", c1_calibration},
      {"C2 fBm entropy growth with ln T", c2_entropy_growth},
      {"C3 fBm AMI scale law", c3_ami_scale},
      {"C4 fBm entropy-rate stationarity and level", c4_rate_level},
      {"C5 correction-term expansion and bound", c5_correction},
      {"C6 increment-transform invariance", c6_increment_invariance},
      {"C7 bias collapse", c7_bias_collapse},
      {"C8 std contrast", c8_std_contrast},
      {"C9 self-similarity discrimination", c9_self_similarity},
      {"C10 MRW intermittency", c10_mrw},
      {"C11 framework consistency", c11_framework},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    const auto start = Clock::now();
    Check c;
    try {
      c = crit.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("    ! exception: ") + e.what() + "\n";
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("%s %s (%.1f s)\n%s", c.ok ? "PASS" : "FAIL", crit.name, secs, c.detail.c_str());
    std::fflush(stdout);
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
