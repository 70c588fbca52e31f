#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ersatz/trajectory.hpp"

namespace ersatz {

/// Delay-embedding parameters: dimension m and delay tau (in samples).
struct EmbeddingSpec {
  std::size_t m = 1;
  std::size_t tau = 1;

  /// Throws DomainError for m or tau of zero, LengthError when (m-1) tau >= length.
  void validate(std::size_t length) const;

  /// Number of embedded points available from a series of `length` samples.
  std::size_t point_count(std::size_t length) const { return length - (m - 1) * tau; }
};

/// Point cloud in R^dim stored row-major.
struct EmbeddedPointSet {
  std::size_t dim = 1;
  std::vector<double> coords;
  EmbeddingSpec spec;

  EmbeddedPointSet() = default;
  EmbeddedPointSet(std::size_t dimension, std::vector<double> coordinates, EmbeddingSpec source = {});

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
  std::span<double> point(std::size_t i) { return {coords.data() + i * dim, dim}; }
};

/// Point i is (x_t, x_{t-tau}, ..., x_{t-(m-1)tau}) with t = i + (m-1) tau.
EmbeddedPointSet takens_embed(std::span<const double> series, const EmbeddingSpec& spec);
EmbeddedPointSet takens_embed(const Trajectory& traj, const EmbeddingSpec& spec);

/// Same vectors, keeping only every `stride`-th one: t = (m-1) tau + i stride.
EmbeddedPointSet takens_embed(std::span<const double> series, const EmbeddingSpec& spec, std::size_t stride);

/// delta_tau x_t = x_t - x_{t-tau} for t = tau .. T-1; the result is a noise.
Trajectory increment_series(const Trajectory& traj, std::size_t tau);

/// Applies Q^m: (x_t, x_{t-tau}, ...) -> (x_t, d x_t, d x_{t-tau}, ..., d x_{t-(m-2)tau}).
EmbeddedPointSet increment_transform(const EmbeddedPointSet& pts);

/// Inverse of increment_transform.
EmbeddedPointSet inverse_increment_transform(const EmbeddedPointSet& pts);

/// Dense row-major Q^m.
std::vector<double> increment_matrix(std::size_t m);

/// det(Q^m) from an LU factorization.
double increment_matrix_determinant(std::size_t m);

/// Standard deviation of the increments of size tau. Throws DegeneracyError
/// when the increments are constant.
double increment_std(std::span<const double> series, std::size_t tau);
double increment_std(const Trajectory& traj, std::size_t tau);

}  // namespace ersatz
