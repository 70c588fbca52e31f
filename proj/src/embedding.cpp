#include "ersatz/embedding.hpp"

#include <string>

#include <Eigen/Dense>

#include "ersatz/errors.hpp"
#include "ersatz/stats.hpp"

namespace ersatz {

void EmbeddingSpec::validate(std::size_t length) const {
  if (m < 1) throw DomainError("embedding dimension m must be >= 1");
  if (tau < 1) throw DomainError("embedding delay tau must be >= 1");
  if ((m - 1) * tau >= length) {
    throw LengthError("embedding span (m-1)*tau = " + std::to_string((m - 1) * tau) +
                      " does not fit in a series of length " + std::to_string(length));
  }
}

EmbeddedPointSet::EmbeddedPointSet(std::size_t dimension, std::vector<double> coordinates, EmbeddingSpec source)
    : dim(dimension), coords(std::move(coordinates)), spec(source) {
  if (dim == 0 || coords.size() % dim != 0) {
    throw DomainError("point coordinates do not split into rows of dimension " + std::to_string(dim));
  }
}

EmbeddedPointSet takens_embed(std::span<const double> series, const EmbeddingSpec& spec) {
  return takens_embed(series, spec, 1);
}

EmbeddedPointSet takens_embed(std::span<const double> series, const EmbeddingSpec& spec, std::size_t stride) {
  spec.validate(series.size());
  if (stride < 1) throw DomainError("embedding stride must be >= 1");
  const std::size_t count = (spec.point_count(series.size()) - 1) / stride + 1;
  const std::size_t offset = (spec.m - 1) * spec.tau;
  std::vector<double> coords(count * spec.m);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = offset + i * stride;
    for (std::size_t j = 0; j < spec.m; ++j) coords[i * spec.m + j] = series[t - j * spec.tau];
  }
  return EmbeddedPointSet(spec.m, std::move(coords), spec);
}

EmbeddedPointSet takens_embed(const Trajectory& traj, const EmbeddingSpec& spec) {
  return takens_embed(std::span<const double>(traj.samples), spec);
}

Trajectory increment_series(const Trajectory& traj, std::size_t tau) {
  if (tau < 1) throw DomainError("increment size tau must be >= 1");
  if (tau >= traj.size()) {
    throw LengthError("increment size " + std::to_string(tau) + " does not fit in " +
                      std::to_string(traj.size()) + " samples");
  }
  Trajectory out{{}, Role::kNoise, traj.spec};
  out.samples.resize(traj.size() - tau);
  for (std::size_t t = tau; t < traj.size(); ++t) out.samples[t - tau] = traj.samples[t] - traj.samples[t - tau];
  return out;
}

EmbeddedPointSet increment_transform(const EmbeddedPointSet& pts) {
  EmbeddedPointSet out = pts;
  const std::size_t m = pts.dim;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto src = pts.point(i);
    auto dst = out.point(i);
    for (std::size_t j = 1; j < m; ++j) dst[j] = src[j - 1] - src[j];
  }
  return out;
}

EmbeddedPointSet inverse_increment_transform(const EmbeddedPointSet& pts) {
  EmbeddedPointSet out = pts;
  const std::size_t m = pts.dim;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto src = pts.point(i);
    auto dst = out.point(i);
    for (std::size_t j = 1; j < m; ++j) dst[j] = dst[j - 1] - src[j];
  }
  return out;
}

std::vector<double> increment_matrix(std::size_t m) {
  std::vector<double> q(m * m, 0.0);
  if (m == 0) return q;
  q[0] = 1.0;
  for (std::size_t row = 1; row < m; ++row) {
    q[row * m + row - 1] = 1.0;
    q[row * m + row] = -1.0;
  }
  return q;
}

double increment_matrix_determinant(std::size_t m) {
  if (m == 0) throw DomainError("increment matrix needs m >= 1");
  const std::vector<double> q = increment_matrix(m);
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> mat(
      q.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  return Eigen::MatrixXd(mat).partialPivLu().determinant();
}

double increment_std(std::span<const double> series, std::size_t tau) {
  if (tau < 1 || tau >= series.size()) throw LengthError("increment size out of range for increment_std");
  std::vector<double> inc(series.size() - tau);
  for (std::size_t t = tau; t < series.size(); ++t) inc[t - tau] = series[t] - series[t - tau];
  const double sd = population_std(inc);
  if (!(sd > 0.0)) throw DegeneracyError("increments of size " + std::to_string(tau) + " are constant");
  return sd;
}

double increment_std(const Trajectory& traj, std::size_t tau) {
  return increment_std(std::span<const double>(traj.samples), tau);
}

}  // namespace ersatz
