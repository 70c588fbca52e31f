#include "ersatz/figures.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>

#include "ersatz/errors.hpp"
#include "ersatz/experiments.hpp"
#include "ersatz/io.hpp"

namespace ersatz {

namespace {

std::vector<std::size_t> powers_of_two(int lo, int hi) {
  std::vector<std::size_t> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// Scale-dependent defaults. Desk values keep a full reproduction within
// minutes on one core.
struct Scale {
  std::size_t realizations;
  std::vector<std::size_t> T_grid;
  std::size_t T_fixed;
  std::vector<std::size_t> tau_grid;
  std::vector<std::size_t> m_values;
  std::vector<std::size_t> bias_T_grid;
  std::vector<std::size_t> bias_k_grid;
  std::size_t pdf_realizations;
};

Scale scale_for(const FigureOptions& opt) {
  Scale s;
  if (opt.full_scale) {
    s = {100, powers_of_two(10, 17), std::size_t{1} << 16, powers_of_two(0, 7), {1, 2, 3, 4},
         powers_of_two(9, 17), range(4, 18), 100};
  } else {
    s = {20, powers_of_two(10, 16), std::size_t{1} << 16, powers_of_two(0, 7), {1, 2},
         powers_of_two(9, 15), range(4, 18), 5};
  }
  if (opt.realizations) {
    s.realizations = *opt.realizations;
    s.pdf_realizations = *opt.realizations;
  }
  return s;
}

NoiseSpec process(NoiseKind kind) {
  NoiseSpec spec;
  spec.kind = kind;
  spec.hurst = 0.7;
  spec.sigma1 = 1.0;
  if (kind == NoiseKind::kMrw) spec.c2 = 0.025;
  return spec;
}

struct Context {
  std::string id;
  FigureOptions options;
  Scale scale;
  FigureOutput output;
  nlohmann::json runs = nlohmann::json::array();

  std::filesystem::path file(NoiseKind kind, std::string_view axis) const {
    return options.out_dir / (id + "_" + std::string(to_string(kind)) + "_" + std::string(axis) + ".csv");
  }
};

void sweep(Context& ctx, NoiseKind kind, SweepAxis axis, Quantity quantity, std::size_t n = 1) {
  SweepPlan plan;
  plan.process = process(kind);
  plan.axis = axis;
  plan.realizations = ctx.scale.realizations;
  plan.base_seed = ctx.options.base_seed;
  plan.threads = ctx.options.threads;
  const bool over_T = axis == SweepAxis::kWindowT;
  plan.grid = over_T ? ctx.scale.T_grid : ctx.scale.tau_grid;
  plan.process.length = over_T ? ctx.scale.T_grid.back() : ctx.scale.T_fixed;
  plan.fit_exclude_largest = over_T ? 0 : 2;
  const bool single_m = kind != NoiseKind::kFgn;
  for (std::size_t m : ctx.scale.m_values) {
    if (single_m && m > 1) break;
    plan.quantities.push_back({quantity, m, n, 1});
  }
  const SweepResult result = run_sweep(plan);
  const auto path = ctx.file(kind, to_string(axis));
  write_sweep_csv(path, result);
  ctx.output.files.push_back(path);
  nlohmann::json run = to_json(plan);
  run["file"] = path.filename().string();
  run["wall_seconds"] = result.wall_seconds;
  ctx.runs.push_back(run);
}

void bias(Context& ctx, NoiseKind kind) {
  const NoiseSpec spec = process(kind);
  const BiasGridResult result = bias_grid(spec, ctx.scale.bias_k_grid, ctx.scale.bias_T_grid, 1, 1,
                                          ctx.scale.realizations, ctx.options.base_seed, ctx.options.threads);
  const auto path = ctx.file(kind, "k_T");
  write_bias_csv(path, result);
  ctx.output.files.push_back(path);
  ctx.runs.push_back({{"file", path.filename().string()},
                      {"process", io::to_json(result.process)},
                      {"quantity", "rate"},
                      {"m", 1},
                      {"tau", 1},
                      {"k_grid", ctx.scale.bias_k_grid},
                      {"T_grid", ctx.scale.bias_T_grid},
                      {"realizations", result.realizations},
                      {"base_seed", result.base_seed},
                      {"reference", result.reference},
                      {"wall_seconds", result.wall_seconds}});
}

void stdev(Context& ctx, NoiseKind kind) {
  const SweepResult result =
      std_vs_T(process(kind), ctx.scale.T_grid, ctx.scale.realizations, ctx.options.base_seed, 1, {},
               ctx.options.threads);
  const auto path = ctx.file(kind, "window_T");
  write_sweep_csv(path, result);
  ctx.output.files.push_back(path);
  nlohmann::json run = to_json(result.plan);
  run["file"] = path.filename().string();
  run["wall_seconds"] = result.wall_seconds;
  ctx.runs.push_back(run);
}

void pdf(Context& ctx, NoiseKind kind) {
  NoiseSpec spec = process(kind);
  spec.length = ctx.scale.T_fixed;
  const auto taus = powers_of_two(0, 6);
  const IncrementPdfResult result =
      increment_pdf(spec, taus, ctx.scale.pdf_realizations, ctx.options.base_seed, ctx.options.threads);
  const auto hist = ctx.file(kind, "tau");
  const auto stats = ctx.file(kind, "tau_stats");
  write_increment_pdf_csv(hist, result);
  write_increment_stats_csv(stats, result);
  ctx.output.files.push_back(hist);
  ctx.output.files.push_back(stats);
  ctx.runs.push_back({{"files", {hist.filename().string(), stats.filename().string()}},
                      {"process", io::to_json(spec)},
                      {"taus", taus},
                      {"realizations", result.realizations},
                      {"base_seed", result.base_seed},
                      {"bins", "freedman_diaconis_shared"},
                      {"wall_seconds", result.wall_seconds}});
}

using Panel = std::function<void(Context&)>;

const std::map<std::string, Panel>& registry() {
  using K = NoiseKind;
  using A = SweepAxis;
  using Q = Quantity;
  static const std::map<std::string, Panel> panels = {
      {"fig1a", [](Context& c) { bias(c, K::kFgn); }},
      {"fig1b", [](Context& c) { bias(c, K::kLognormalH1); }},
      {"fig1c", [](Context& c) { bias(c, K::kLognormalH2); }},
      {"fig2a", [](Context& c) { stdev(c, K::kFgn); }},
      {"fig2b", [](Context& c) { stdev(c, K::kLognormalH1); }},
      {"fig2c", [](Context& c) { stdev(c, K::kLognormalH2); }},
      {"fig3a", [](Context& c) { sweep(c, K::kFgn, A::kWindowT, Q::kEntropy); }},
      {"fig3b", [](Context& c) { sweep(c, K::kFgn, A::kScaleTau, Q::kEntropy); }},
      {"fig3c", [](Context& c) { sweep(c, K::kFgn, A::kWindowT, Q::kAmi); }},
      {"fig3d", [](Context& c) { sweep(c, K::kFgn, A::kScaleTau, Q::kAmi); }},
      {"fig4a", [](Context& c) { sweep(c, K::kFgn, A::kWindowT, Q::kEntropyRate); }},
      {"fig4b", [](Context& c) { sweep(c, K::kFgn, A::kScaleTau, Q::kEntropyRate); }},
      {"fig5", [](Context& c) { sweep(c, K::kFgn, A::kScaleTau, Q::kEntropyRateNormalized); }},
      {"fig6a",
       [](Context& c) {
         sweep(c, K::kLognormalH1, A::kWindowT, Q::kEntropyRate);
         sweep(c, K::kLognormalH2, A::kWindowT, Q::kEntropyRate);
       }},
      {"fig6b",
       [](Context& c) {
         sweep(c, K::kLognormalH1, A::kScaleTau, Q::kEntropyRate);
         sweep(c, K::kLognormalH2, A::kScaleTau, Q::kEntropyRate);
       }},
      {"fig7",
       [](Context& c) {
         sweep(c, K::kLognormalH1, A::kScaleTau, Q::kEntropyRateNormalized);
         sweep(c, K::kLognormalH2, A::kScaleTau, Q::kEntropyRateNormalized);
         sweep(c, K::kFgn, A::kScaleTau, Q::kEntropyRateNormalized);
       }},
      {"fig8a", [](Context& c) { pdf(c, K::kLognormalH1); }},
      {"fig8b", [](Context& c) { pdf(c, K::kLognormalH2); }},
      {"fig9a", [](Context& c) { pdf(c, K::kFgn); }},
      {"fig9b", [](Context& c) { pdf(c, K::kMrw); }},
      {"fig10a", [](Context& c) { sweep(c, K::kMrw, A::kWindowT, Q::kEntropyRate); }},
      {"fig10b", [](Context& c) { sweep(c, K::kMrw, A::kScaleTau, Q::kEntropyRate); }},
      {"fig11", [](Context& c) { sweep(c, K::kMrw, A::kScaleTau, Q::kEntropyRateNormalized); }},
  };
  return panels;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, panel] : registry()) out.push_back(id);
    // numeric order: fig2a before fig10a
    std::stable_sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
      const int na = std::stoi(a.substr(3));
      const int nb = std::stoi(b.substr(3));
      return na != nb ? na < nb : a < b;
    });
    return out;
  }();
  return ids;
}

std::optional<std::vector<std::string>> expand_figure_id(std::string_view id) {
  const std::string key(id);
  if (registry().contains(key)) return std::vector<std::string>{key};
  std::vector<std::string> panels;
  for (const auto& p : figure_ids()) {
    if (p.size() == key.size() + 1 && p.starts_with(key) && p.back() >= 'a' && p.back() <= 'z') panels.push_back(p);
  }
  if (panels.empty()) return std::nullopt;
  return panels;
}

FigureOutput reproduce_figure(const std::string& id, const FigureOptions& options) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw DomainError("unknown figure id '" + id + "'");
  if (options.realizations && *options.realizations < 1) throw DomainError("realizations must be >= 1");

  const auto start = std::chrono::steady_clock::now();
  Context ctx{id, options, scale_for(options), {}, nlohmann::json::array()};
  std::filesystem::create_directories(options.out_dir);
  it->second(ctx);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : ctx.output.files) files.push_back(f.filename().string());
  ctx.output.manifest = {{"figure", id},
                         {"schema_version", kOutputSchemaVersion},
                         {"library_version", std::string(kLibraryVersion)},
                         {"full_scale", options.full_scale},
                         {"realizations", ctx.scale.realizations},
                         {"base_seed", options.base_seed},
                         {"threads", options.threads},
                         {"wall_seconds", wall},
                         {"files", files},
                         {"runs", ctx.runs}};
  const auto manifest_path = options.out_dir / (id + "_manifest.json");
  std::ofstream out(manifest_path);
  if (!out) throw ParseError("cannot write " + manifest_path.string());
  out << ctx.output.manifest.dump(2) << '\n';
  ctx.output.files.push_back(manifest_path);
  return ctx.output;
}

}  // namespace ersatz
