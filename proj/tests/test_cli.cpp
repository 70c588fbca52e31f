#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace ersatz::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "ersatz_cli";
  fs::create_directories(dir);
  return dir;
}

TEST(ParseSize, Forms) {
  EXPECT_EQ(parse_size("1024"), 1024u);
  EXPECT_EQ(parse_size("2^10"), 1024u);
  EXPECT_FALSE(parse_size("2^64"));
  EXPECT_FALSE(parse_size("ten"));
  EXPECT_FALSE(parse_size("-3"));
}

TEST(Cli, SynthThenEstimate) {
  const fs::path csv = scratch_dir() / "fbm.csv";
  const CliResult s = run_cli({"synth", "--kind", "fgn", "--hurst", "0.7", "--length", "65536", "--seed", "1", "-o",
                         csv.string()});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  ASSERT_TRUE(fs::exists(csv));
  const CliResult e = run_cli({"estimate", "-i", csv.string(), "--quantity", "rate", "--m", "1", "--tau", "1", "--k", "5"});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const auto pos = e.out.find("value_nats=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(e.out.substr(pos + 11)), 1.42, 0.05);
}

TEST(Cli, ValidationExitCodes) {
  EXPECT_EQ(run_cli({"synth", "--hurst", "1.5"}).code, kExitUsage);
  EXPECT_NE(run_cli({"synth", "--hurst", "1.5"}).err.find("(0,1)"), std::string::npos);
  EXPECT_EQ(run_cli({"synth", "--length", "1000"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"estimate", "-i", "x.csv", "--k", "0"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({}).code, kExitUsage);
}

TEST(Cli, MissingFileIsIoError) {
  EXPECT_EQ(run_cli({"estimate", "-i", (scratch_dir() / "nope.csv").string()}).code, kExitIo);
}

TEST(Cli, EstimateTooShortIsUsage) {
  const fs::path csv = scratch_dir() / "short.csv";
  std::ofstream(csv) << "index,value\n0,1\n1,2\n2,4\n";
  fs::remove(csv.string() + ".json");
  EXPECT_EQ(run_cli({"estimate", "-i", csv.string(), "--tau", "8"}).code, kExitUsage);
}

TEST(Cli, ReproduceUnknownFigure) {
  const CliResult r = run_cli({"reproduce", "fig0"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("fig0"), std::string::npos);
}

TEST(Cli, ReproduceRealizationOverride) {
  const fs::path dir = scratch_dir() / "fig4b";
  fs::remove_all(dir);
  const CliResult r = run_cli({"reproduce", "fig4b", "--realizations", "2", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(dir / "fig4b_manifest.json");
  const nlohmann::json manifest = nlohmann::json::parse(in);
  EXPECT_EQ(manifest.at("realizations").get<int>(), 2);
  EXPECT_TRUE(fs::exists(dir / "fig4b_fgn_scale_tau.csv"));
}

TEST(Cli, SweepWritesCsvAndManifest) {
  const fs::path csv = scratch_dir() / "sweep.csv";
  const CliResult r = run_cli({"sweep", "--axis", "scale_tau", "--grid", "1", "2^2", "--length", "2^12", "--quantity", "ami",
                         "--realizations", "2", "-o", csv.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(csv));
}

}  // namespace
}  // namespace ersatz::cli
