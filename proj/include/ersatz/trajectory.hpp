#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ersatz {

enum class NoiseKind { kFgn, kLognormalH1, kLognormalH2, kMrw };

enum class Role { kNoise, kMotion };

std::string_view to_string(NoiseKind kind);
std::string_view to_string(Role role);
std::optional<NoiseKind> parse_noise_kind(std::string_view text);
std::optional<Role> parse_role(std::string_view text);

/// Default log-normal marginal: log X is a standard normal variable.
inline const double kDefaultLognormalMean = std::exp(0.5);
inline const double kDefaultLognormalStd = std::sqrt(std::numbers::e * (std::numbers::e - 1.0));

/// Full description of one synthesized noise realization.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kFgn;
  double hurst = 0.7;
  double sigma1 = 1.0;
  std::size_t length = std::size_t{1} << 16;
  std::uint64_t seed = 1;
  /// MRW intermittency coefficient.
  double c2 = 0.0;
  /// MRW integral scale in samples; 0 stands for `length`.
  std::size_t integral_scale = 0;
  double lognormal_mu = kDefaultLognormalMean;
  double lognormal_sigma = kDefaultLognormalStd;

  std::size_t effective_integral_scale() const { return integral_scale == 0 ? length : integral_scale; }

  /// Throws DomainError naming the offending field.
  void validate() const;

  bool operator==(const NoiseSpec&) const = default;
};

/// An equi-sampled series (dt = 1) together with the spec that produced it.
struct Trajectory {
  std::vector<double> samples;
  Role role = Role::kNoise;
  NoiseSpec spec;

  std::size_t size() const { return samples.size(); }
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace ersatz
