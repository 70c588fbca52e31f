#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ersatz/embedding.hpp"

namespace ersatz {

/// Max-norm (Chebyshev) distance, computed coordinate-wise as |fl(a - b)|.
double max_norm_distance(std::span<const double> a, std::span<const double> b);

/// Reference implementations, O(N) per query. Point `i` itself is excluded.
double brute_kth_neighbor_distance(const EmbeddedPointSet& pts, std::size_t i, std::size_t k);
std::size_t brute_count_within(const EmbeddedPointSet& pts, std::size_t i, double radius);

/// Static max-norm neighbor index over a point cloud.
///
/// Queries are by point index and always exclude the query point itself (but
/// not its duplicates). `count_within` counts points at distance strictly
/// below the radius. The index owns a reordered copy of the coordinates and is
/// immutable after construction, so queries may run concurrently.
class NeighborIndex {
 public:
  enum class Backend { kAuto, kBruteForce, kSorted1d, kKdTree };

  /// Below this size kAuto answers queries by brute force.
  static constexpr std::size_t kBruteForceThreshold = 2048;

  explicit NeighborIndex(const EmbeddedPointSet& pts, Backend backend = Backend::kAuto,
                         std::size_t leaf_size = 8);

  Backend backend() const { return backend_; }
  std::size_t size() const { return count_; }
  std::size_t dim() const { return dim_; }

  double kth_neighbor_distance(std::size_t i, std::size_t k) const;
  std::size_t count_within(std::size_t i, double radius) const;

 private:
  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t left = 0;  // 0 marks a leaf (the root is never a child)
    std::size_t right = 0;
  };

  class KBest;

  std::size_t build(std::size_t begin, std::size_t end, std::size_t leaf_size);
  std::span<const double> coords_at(std::size_t slot) const { return {coords_.data() + slot * dim_, dim_}; }
  double box_distance(std::size_t node, std::span<const double> q) const;
  bool box_inside(std::size_t node, std::span<const double> q, double radius) const;
  void knn_recurse(std::size_t node, std::span<const double> q, std::size_t self_slot, KBest& best) const;
  std::size_t count_recurse(std::size_t node, std::span<const double> q, std::size_t self_slot,
                            double radius) const;

  Backend backend_;
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> coords_;       // reordered (by tree slot or by sorted value)
  std::vector<std::size_t> slot_of_;  // original index -> slot
  std::vector<Node> nodes_;
  std::vector<double> box_lo_;
  std::vector<double> box_hi_;
};

}  // namespace ersatz
