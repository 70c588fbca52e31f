#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ersatz {

struct FigureOptions {
  bool full_scale = false;
  std::optional<std::size_t> realizations;  // overrides the per-figure default
  std::uint64_t base_seed = 1;
  std::size_t threads = 0;
  std::filesystem::path out_dir = ".";
};

struct FigureOutput {
  std::vector<std::filesystem::path> files;  // CSVs, manifest last
  nlohmann::json manifest;
};

/// All panel identifiers, fig1a .. fig11.
const std::vector<std::string>& figure_ids();

/// A panel id maps to itself, a whole-figure id such as "fig3" to its panels;
/// anything else to nullopt.
std::optional<std::vector<std::string>> expand_figure_id(std::string_view id);

/// Runs one panel and writes `<id>_<process>_<axis>.csv` files plus
/// `<id>_manifest.json` into options.out_dir.
FigureOutput reproduce_figure(const std::string& id, const FigureOptions& options);

}  // namespace ersatz
