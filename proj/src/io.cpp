#include "ersatz/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ersatz/errors.hpp"

namespace ersatz::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const NoiseSpec& spec) {
  return {
      {"kind", std::string(to_string(spec.kind))},
      {"hurst", spec.hurst},
      {"sigma1", spec.sigma1},
      {"length", spec.length},
      {"seed", spec.seed},
      {"c2", spec.c2},
      {"integral_scale", spec.integral_scale},
      {"lognormal_mu", spec.lognormal_mu},
      {"lognormal_sigma", spec.lognormal_sigma},
  };
}

NoiseSpec noise_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("noise spec must be a JSON object");
  NoiseSpec spec;
  try {
    if (j.contains("kind")) {
      const auto kind = parse_noise_kind(j.at("kind").get<std::string>());
      if (!kind) throw ParseError("unknown noise kind '" + j.at("kind").get<std::string>() + "'");
      spec.kind = *kind;
    }
    spec.hurst = j.value("hurst", spec.hurst);
    spec.sigma1 = j.value("sigma1", spec.sigma1);
    spec.length = j.value("length", spec.length);
    spec.seed = j.value("seed", spec.seed);
    spec.c2 = j.value("c2", spec.c2);
    spec.integral_scale = j.value("integral_scale", spec.integral_scale);
    spec.lognormal_mu = j.value("lognormal_mu", spec.lognormal_mu);
    spec.lognormal_sigma = j.value("lognormal_sigma", spec.lognormal_sigma);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed noise spec: ") + e.what());
  }
  return spec;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p += ".json";
  return p;
}

void write_trajectory(const std::filesystem::path& csv, const Trajectory& traj) {
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  {
    std::ofstream out(csv);
    if (!out) throw ParseError("cannot open " + csv.string() + " for writing");
    out << "index,value\n";
    for (std::size_t i = 0; i < traj.samples.size(); ++i) out << i << ',' << format_double(traj.samples[i]) << '\n';
    if (!out) throw ParseError("write to " + csv.string() + " failed");
  }
  nlohmann::json side = {{"role", std::string(to_string(traj.role))},
                         {"samples", traj.samples.size()},
                         {"spec", to_json(traj.spec)}};
  std::ofstream out(sidecar_path(csv));
  if (!out) throw ParseError("cannot open sidecar for " + csv.string());
  out << side.dump(2) << '\n';
}

namespace {

double parse_number(std::string_view text, std::size_t line) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

}  // namespace

Trajectory read_trajectory(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open " + csv.string());

  Trajectory traj;
  traj.role = Role::kMotion;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "index,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected 'index,value'");
    const std::string_view view(line);
    const double index = parse_number(view.substr(0, comma), line_no);
    if (index != static_cast<double>(traj.samples.size())) {
      throw ParseError("line " + std::to_string(line_no) + ": index out of sequence");
    }
    traj.samples.push_back(parse_number(view.substr(comma + 1), line_no));
  }
  if (traj.samples.empty()) throw ParseError(csv.string() + " holds no samples");

  traj.spec.length = traj.samples.size();
  const auto side = sidecar_path(csv);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    nlohmann::json j;
    try {
      sin >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("malformed sidecar " + side.string() + ": " + e.what());
    }
    if (j.contains("spec")) traj.spec = noise_spec_from_json(j.at("spec"));
    if (j.contains("role")) {
      const auto role = parse_role(j.at("role").is_string() ? j.at("role").get<std::string>() : "");
      if (!role) throw ParseError("sidecar role must be 'noise' or 'motion'");
      traj.role = *role;
    }
  }
  return traj;
}

}  // namespace ersatz::io
