#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ersatz {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key selects an independent stream family and the upper half of
/// the 128-bit counter selects a substream, so realizations and the different
/// random fields inside one realization never share counters. Output depends
/// only on (key, substream, position), never on scheduling.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t substream)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        substream_(substream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) {
      refill();
    }
    return buffer_[lane_++];
  }

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller, both outputs used).
  double normal();

  /// Raw bijection, exposed for known-answer tests.
  static Block bijection(Block counter, Key key);

 private:
  void refill();

  Key key_;
  std::uint64_t substream_;
  std::uint64_t position_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int lane_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Per-realization stream key: base seed XOR realization index.
constexpr std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t realization) {
  return base_seed ^ realization;
}

/// Substream identifiers used inside one realization.
enum class Substream : std::uint64_t {
  kGaussianField = 0,
  kCascadeField = 1,
  kJitter = 2,
};

inline Philox4x32 make_rng(std::uint64_t seed, Substream which) {
  return Philox4x32(seed, static_cast<std::uint64_t>(which));
}

}  // namespace ersatz
