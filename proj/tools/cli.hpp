#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ersatz::cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitNumerical = 4;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "ERSATZ_OUT_DIR";

/// Decimal integer or `2^N`.
std::optional<std::size_t> parse_size(const std::string& text);

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ersatz::cli
