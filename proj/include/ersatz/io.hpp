#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ersatz/trajectory.hpp"

namespace ersatz::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

nlohmann::json to_json(const NoiseSpec& spec);
/// Missing fields keep their defaults; malformed ones throw ParseError.
NoiseSpec noise_spec_from_json(const nlohmann::json& j);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Writes `index,value` rows to `csv` and the spec and role to `<csv>.json`.
void write_trajectory(const std::filesystem::path& csv, const Trajectory& traj);

/// Reads a trajectory CSV. The sidecar is optional; without it the spec is
/// the default one with `length` set to the sample count and the role is
/// taken as a motion. Throws ParseError on malformed content and on I/O
/// failure.
Trajectory read_trajectory(const std::filesystem::path& csv);

}  // namespace ersatz::io
