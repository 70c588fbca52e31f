#include "ersatz/trajectory.hpp"

#include <string>

#include "ersatz/errors.hpp"

namespace ersatz {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kFgn: return "fgn";
    case NoiseKind::kLognormalH1: return "lognormal_h1";
    case NoiseKind::kLognormalH2: return "lognormal_h2";
    case NoiseKind::kMrw: return "mrw";
  }
  return "unknown";
}

std::string_view to_string(Role role) { return role == Role::kNoise ? "noise" : "motion"; }

std::optional<NoiseKind> parse_noise_kind(std::string_view text) {
  for (NoiseKind kind : {NoiseKind::kFgn, NoiseKind::kLognormalH1, NoiseKind::kLognormalH2, NoiseKind::kMrw}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "noise") return Role::kNoise;
  if (text == "motion") return Role::kMotion;
  return std::nullopt;
}

void NoiseSpec::validate() const {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw DomainError("hurst must lie in the open interval (0,1), got " + std::to_string(hurst));
  }
  if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) {
    throw DomainError("sigma1 must be positive, got " + std::to_string(sigma1));
  }
  if (!is_power_of_two(length) || length < 2) {
    throw DomainError("length must be a power of two >= 2, got " + std::to_string(length));
  }
  if (kind == NoiseKind::kMrw) {
    if (!(c2 >= 0.0) || !std::isfinite(c2)) {
      throw DomainError("c2 must be non-negative, got " + std::to_string(c2));
    }
    if (effective_integral_scale() > length) {
      throw DomainError("integral scale L must not exceed length, got L=" +
                        std::to_string(effective_integral_scale()));
    }
    if (!(hurst + c2 < 1.0)) {
      throw DomainError("hurst + c2 must stay below 1 for the fGn factor, got " + std::to_string(hurst + c2));
    }
  }
  if (kind == NoiseKind::kLognormalH1 || kind == NoiseKind::kLognormalH2) {
    if (!(lognormal_mu > 0.0) || !std::isfinite(lognormal_mu)) {
      throw DomainError("lognormal mu must be positive, got " + std::to_string(lognormal_mu));
    }
    if (!(lognormal_sigma > 0.0) || !std::isfinite(lognormal_sigma)) {
      throw DomainError("lognormal sigma must be positive, got " + std::to_string(lognormal_sigma));
    }
  }
}

}  // namespace ersatz
