#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "ersatz/errors.hpp"
#include "ersatz/estimators.hpp"
#include "ersatz/experiments.hpp"
#include "ersatz/figures.hpp"
#include "ersatz/io.hpp"
#include "ersatz/synthesis.hpp"

namespace ersatz::cli {

namespace fs = std::filesystem;

std::optional<std::size_t> parse_size(const std::string& text) {
  auto parse_plain = [](std::string_view s) -> std::optional<std::size_t> {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, 10);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  if (text.starts_with("2^")) {
    const auto e = parse_plain(std::string_view(text).substr(2));
    if (!e || *e >= 63) return std::nullopt;
    return std::size_t{1} << *e;
  }
  return parse_plain(text);
}

namespace {

// Rewrites `2^N` into its decimal value so that CLI11 can convert it.
const CLI::Validator kSizeText(
    [](std::string& s) -> std::string {
      const auto v = parse_size(s);
      if (!v) return "expected a non-negative integer or 2^N, got '" + s + "'";
      s = std::to_string(*v);
      return {};
    },
    "INT|2^N", "size");

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (const std::exception&) {
        return "expected a number in the open interval (0,1), got '" + s + "'";
      }
      if (!(v > 0.0 && v < 1.0)) return "value " + s + " outside the valid range (0,1)";
      return {};
    },
    "(0,1)", "open_unit");

const CLI::Validator kPowerOfTwo(
    [](std::string& s) -> std::string {
      const auto v = parse_size(s);
      if (!v || !is_power_of_two(*v) || *v < 2) return "length must be a power of two >= 2, got '" + s + "'";
      return {};
    },
    "POW2", "power_of_two");

struct ProcessFlags {
  std::string kind = "fgn";
  double hurst = 0.7;
  double sigma1 = 1.0;
  std::size_t length = std::size_t{1} << 16;
  std::uint64_t seed = 1;
  double c2 = 0.0;
  std::size_t integral_scale = 0;
  double mu = kDefaultLognormalMean;
  double sigma = kDefaultLognormalStd;

  NoiseSpec spec() const {
    NoiseSpec s;
    s.kind = *parse_noise_kind(kind);
    s.hurst = hurst;
    s.sigma1 = sigma1;
    s.length = length;
    s.seed = seed;
    s.c2 = c2;
    s.integral_scale = integral_scale;
    s.lognormal_mu = mu;
    s.lognormal_sigma = sigma;
    return s;
  }
};

void add_process_flags(CLI::App* app, ProcessFlags& f, bool with_seed) {
  app->add_option("--kind", f.kind, "Noise kind")
      ->check(CLI::IsMember({"fgn", "lognormal_h1", "lognormal_h2", "mrw"}))
      ->capture_default_str();
  app->add_option("--hurst", f.hurst, "Hurst exponent")->check(kOpenUnit)->capture_default_str();
  app->add_option("--sigma1", f.sigma1, "Std of the unit-scale increments")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--length", f.length, "Samples, power of two (2^N accepted)")
      ->transform(kSizeText)
      ->check(kPowerOfTwo)
      ->capture_default_str();
  if (with_seed) app->add_option("--seed", f.seed, "Random seed")->capture_default_str();
  app->add_option("--c2", f.c2, "MRW intermittency coefficient")->check(CLI::NonNegativeNumber)->capture_default_str();
  app->add_option("--L", f.integral_scale, "MRW integral scale (0 = length)")->transform(kSizeText);
  app->add_option("--mu", f.mu, "Log-normal marginal mean")->check(CLI::PositiveNumber);
  app->add_option("--sigma", f.sigma, "Log-normal marginal std")->check(CLI::PositiveNumber);
}

void add_size_list(CLI::App* app, const std::string& name, std::vector<std::size_t>& target, const std::string& help) {
  app->add_option(name, target, help)->transform(kSizeText)->delimiter(',');
}

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return fs::path(env);
  return fs::path(".");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain:
    case ErrorKind::kLength: return kExitUsage;
    case ErrorKind::kParse: return kExitIo;
    case ErrorKind::kSynthesis:
    case ErrorKind::kConvergence:
    case ErrorKind::kDegeneracy: return kExitNumerical;
  }
  return kExitNumerical;
}

void write_manifest(const fs::path& path, nlohmann::json body, double wall_seconds) {
  body["schema_version"] = kOutputSchemaVersion;
  body["library_version"] = std::string(kLibraryVersion);
  body["wall_seconds"] = wall_seconds;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << body.dump(2) << '\n';
}

fs::path manifest_for(const fs::path& csv) {
  return csv.parent_path() / (csv.stem().string() + "_manifest.json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ersatz information quantities of non-stationary processes"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // synth
  ProcessFlags synth_flags;
  std::string role = "motion";
  std::string synth_output;
  auto* synth = app.add_subcommand("synth", "Synthesize one trajectory");
  add_process_flags(synth, synth_flags, true);
  synth->add_option("--role", role, "Write the noise or its integrated motion")
      ->check(CLI::IsMember({"noise", "motion"}))
      ->capture_default_str();
  synth->add_option("-o,--output", synth_output, "Output CSV (default: <out dir>/<kind>_seed<seed>.csv)");

  // estimate
  std::string input;
  std::string quantity = "rate";
  std::size_t m = 1, n = 1, tau = 1, k = 5, window = 0;
  std::string window_mode = "average";
  std::string estimate_csv;
  auto* estimate = app.add_subcommand("estimate", "Estimate an ersatz quantity on a trajectory file");
  estimate->add_option("-i,--input", input, "Trajectory CSV")->required();
  estimate->add_option("--quantity", quantity, "entropy | ami | rate | rate-normalized | rate-diff")
      ->check(CLI::IsMember({"entropy", "ami", "rate", "rate-normalized", "rate-diff"}))
      ->capture_default_str();
  estimate->add_option("--m", m, "Embedding dimension")->check(CLI::PositiveNumber)->capture_default_str();
  estimate->add_option("--n", n, "Second embedding dimension (ami)")->check(CLI::PositiveNumber)->capture_default_str();
  estimate->add_option("--tau", tau, "Delay / scale")->transform(kSizeText)->check(CLI::PositiveNumber);
  estimate->add_option("--k", k, "Neighbors")->check(CLI::PositiveNumber)->capture_default_str();
  estimate->add_option("--window", window, "Window length T (0 = whole series)")->transform(kSizeText);
  estimate->add_option("--window-mode", window_mode, "average | pool")
      ->check(CLI::IsMember({"average", "pool"}))
      ->capture_default_str();
  estimate->add_option("--csv", estimate_csv, "Also append the estimate to this CSV");

  // sweep
  ProcessFlags sweep_flags;
  std::string axis = "window_T";
  std::vector<std::size_t> grid;
  std::vector<std::string> sweep_quantities{"rate"};
  std::size_t realizations = 20;
  std::uint64_t base_seed = 1;
  std::size_t fit_exclude = 0;
  std::string sweep_output;
  auto* sweep = app.add_subcommand("sweep", "Ensemble sweep over one axis");
  add_process_flags(sweep, sweep_flags, false);
  sweep->add_option("--axis", axis, "window_T | scale_tau | neighbors_k | embedding_m")
      ->check(CLI::IsMember({"window_T", "scale_tau", "neighbors_k", "embedding_m"}))
      ->capture_default_str();
  add_size_list(sweep, "--grid", grid, "Comma-separated grid values (2^N accepted)");
  sweep->get_option("--grid")->required();
  sweep->add_option("--quantity", sweep_quantities, "Quantities to estimate")
      ->check(CLI::IsMember({"entropy", "ami", "rate", "rate-normalized", "rate-diff"}))
      ->delimiter(',');
  sweep->add_option("--m", m, "Embedding dimension")->check(CLI::PositiveNumber);
  sweep->add_option("--n", n, "Second embedding dimension (ami)")->check(CLI::PositiveNumber);
  sweep->add_option("--tau", tau, "Delay / scale")->transform(kSizeText)->check(CLI::PositiveNumber);
  sweep->add_option("--k", k, "Neighbors")->check(CLI::PositiveNumber);
  sweep->add_option("--window", window, "Window for non-T axes (0 = length)")->transform(kSizeText);
  sweep->add_option("--realizations", realizations, "Ensemble size R")->check(CLI::PositiveNumber);
  sweep->add_option("--base-seed", base_seed, "Base seed");
  sweep->add_option("--fit-exclude", fit_exclude, "Largest grid points left out of the slope fit");
  sweep->add_option("-o,--output", sweep_output, "Output CSV");

  // bias-grid
  ProcessFlags bias_flags;
  std::vector<std::size_t> k_grid{4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18};
  std::vector<std::size_t> T_grid{512, 1024, 2048, 4096, 8192, 16384, 32768};
  std::string bias_output;
  auto* bias = app.add_subcommand("bias-grid", "Entropy rate over a (k, T) grid");
  add_process_flags(bias, bias_flags, false);
  add_size_list(bias, "--k-grid", k_grid, "Neighbor counts");
  add_size_list(bias, "--T-grid", T_grid, "Window lengths (2^N accepted)");
  bias->add_option("--m", m, "Embedding dimension")->check(CLI::PositiveNumber);
  bias->add_option("--tau", tau, "Delay")->transform(kSizeText)->check(CLI::PositiveNumber);
  bias->add_option("--realizations", realizations, "Ensemble size R")->check(CLI::PositiveNumber);
  bias->add_option("--base-seed", base_seed, "Base seed");
  bias->add_option("-o,--output", bias_output, "Output CSV");

  // pdf
  ProcessFlags pdf_flags;
  std::vector<std::size_t> taus{1, 2, 4, 8, 16, 32, 64};
  std::size_t pdf_realizations = 1;
  std::string pdf_output;
  auto* pdf = app.add_subcommand("pdf", "Unit-std increment PDFs across scales");
  add_process_flags(pdf, pdf_flags, false);
  add_size_list(pdf, "--taus", taus, "Increment sizes (2^N accepted)");
  pdf->add_option("--realizations", pdf_realizations, "Realizations pooled")->check(CLI::PositiveNumber);
  pdf->add_option("--base-seed", base_seed, "Base seed");
  pdf->add_option("-o,--output", pdf_output, "Histogram CSV; statistics go to <stem>_stats.csv");

  // reproduce
  std::vector<std::string> figures;
  bool full_scale = false;
  std::optional<std::size_t> fig_realizations;
  std::string out_dir;
  auto* reproduce = app.add_subcommand("reproduce", "Write the data behind a figure panel");
  reproduce->add_option("figure", figures, "Figure ids (fig1a .. fig11, or a whole figure such as fig3)")->required();
  reproduce->add_flag("--full-scale", full_scale, "Use the full-scale grids and ensemble sizes");
  reproduce->add_option("--realizations", fig_realizations, "Override the ensemble size")->check(CLI::PositiveNumber);
  reproduce->add_option("--base-seed", base_seed, "Base seed");
  reproduce->add_option("--out-dir", out_dir, "Output directory (default: $ERSATZ_OUT_DIR or .)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      NoiseSpec spec = synth_flags.spec();
      spec.validate();
      const Trajectory noise = synthesize_noise(spec);
      const Trajectory traj = role == "motion" ? integrate_to_motion(noise) : noise;
      const fs::path path = synth_output.empty()
                                ? default_out_dir() / (synth_flags.kind + "_seed" + std::to_string(spec.seed) + ".csv")
                                : fs::path(synth_output);
      io::write_trajectory(path, traj);
      out << "wrote " << path.string() << " (" << traj.size() << " samples, role=" << role << ")\n";
      return kExitOk;
    }

    if (estimate->parsed()) {
      const Trajectory traj = io::read_trajectory(input);
      const Quantity q = *parse_quantity(quantity);
      EstimatorConfig cfg;
      cfg.k = k;
      cfg.jitter_seed = traj.spec.seed;
      const InfoEstimate e =
          window == 0 ? estimate_quantity(q, traj.samples, m, n, tau, cfg, traj.spec.seed)
                      : windowed_estimate(q, traj.samples, window,
                                          window_mode == "pool" ? WindowMode::kPool : WindowMode::kAverage, m, n, tau,
                                          cfg, traj.spec.seed);
      out << "quantity=" << to_string(e.quantity) << " value_nats=" << io::format_double(e.value) << " m=" << e.m
          << " n=" << e.n << " tau=" << e.tau << " T=" << e.T << " k=" << e.k << " seed=" << e.seed << '\n';
      if (!estimate_csv.empty()) {
        const bool fresh = !fs::exists(estimate_csv);
        std::ofstream csv(estimate_csv, std::ios::app);
        if (!csv) throw ParseError("cannot open " + estimate_csv);
        if (fresh) csv << "quantity,value_nats,m,n,tau,T,k,seed\n";
        csv << to_string(e.quantity) << ',' << io::format_double(e.value) << ',' << e.m << ',' << e.n << ','
            << e.tau << ',' << e.T << ',' << e.k << ',' << e.seed << '\n';
      }
      return kExitOk;
    }

    if (sweep->parsed()) {
      SweepPlan plan;
      plan.process = sweep_flags.spec();
      plan.axis = *parse_sweep_axis(axis);
      plan.grid = grid;
      if (plan.axis == SweepAxis::kWindowT) {
        plan.process.length = std::max(plan.process.length, *std::max_element(grid.begin(), grid.end()));
      }
      plan.realizations = realizations;
      plan.base_seed = base_seed;
      plan.estimator.k = k;
      plan.window = window;
      plan.fit_exclude_largest = fit_exclude;
      plan.threads = threads;
      for (const auto& qs : sweep_quantities) plan.quantities.push_back({*parse_quantity(qs), m, n, tau});
      const SweepResult result = run_sweep(plan);
      const fs::path path = sweep_output.empty()
                                ? default_out_dir() / ("sweep_" + sweep_flags.kind + "_" + axis + ".csv")
                                : fs::path(sweep_output);
      write_sweep_csv(path, result);
      write_manifest(manifest_for(path), {{"command", "sweep"}, {"plan", to_json(plan)}}, result.wall_seconds);
      out << "wrote " << path.string() << " (" << result.rows.size() << " rows)\n";
      return kExitOk;
    }

    if (bias->parsed()) {
      NoiseSpec spec = bias_flags.spec();
      const BiasGridResult result = bias_grid(spec, k_grid, T_grid, m, tau, realizations, base_seed, threads);
      const fs::path path = bias_output.empty() ? default_out_dir() / ("bias_" + bias_flags.kind + "_k_T.csv")
                                                : fs::path(bias_output);
      write_bias_csv(path, result);
      write_manifest(manifest_for(path),
                     {{"command", "bias-grid"},
                      {"process", io::to_json(result.process)},
                      {"k_grid", k_grid},
                      {"T_grid", T_grid},
                      {"m", m},
                      {"tau", tau},
                      {"realizations", realizations},
                      {"base_seed", base_seed}},
                     result.wall_seconds);
      out << "wrote " << path.string() << " (" << result.points.size() << " grid points)\n";
      return kExitOk;
    }

    if (pdf->parsed()) {
      const NoiseSpec spec = pdf_flags.spec();
      const IncrementPdfResult result = increment_pdf(spec, taus, pdf_realizations, base_seed, threads);
      const fs::path path = pdf_output.empty() ? default_out_dir() / ("pdf_" + pdf_flags.kind + "_tau.csv")
                                               : fs::path(pdf_output);
      const fs::path stats = path.parent_path() / (path.stem().string() + "_stats.csv");
      write_increment_pdf_csv(path, result);
      write_increment_stats_csv(stats, result);
      write_manifest(manifest_for(path),
                     {{"command", "pdf"},
                      {"process", io::to_json(spec)},
                      {"taus", taus},
                      {"realizations", pdf_realizations},
                      {"base_seed", base_seed}},
                     result.wall_seconds);
      out << "wrote " << path.string() << " and " << stats.string() << '\n';
      return kExitOk;
    }

    if (reproduce->parsed()) {
      std::vector<std::string> panels;
      for (const auto& id : figures) {
        const auto expanded = expand_figure_id(id);
        if (!expanded) {
          err << "unknown figure id '" << id << "'; valid ids are fig1a .. fig11\n";
          return kExitUsage;
        }
        panels.insert(panels.end(), expanded->begin(), expanded->end());
      }
      FigureOptions options;
      options.full_scale = full_scale;
      options.realizations = fig_realizations;
      options.base_seed = base_seed;
      options.threads = threads;
      options.out_dir = out_dir.empty() ? default_out_dir() : fs::path(out_dir);
      for (const auto& id : panels) {
        const FigureOutput result = reproduce_figure(id, options);
        for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace ersatz::cli
