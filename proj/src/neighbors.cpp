#include "ersatz/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ersatz/errors.hpp"

namespace ersatz {

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

namespace {

void check_k(std::size_t k, std::size_t count) {
  if (k < 1 || k >= count) {
    throw DomainError("neighbor rank k=" + std::to_string(k) + " must satisfy 1 <= k < N=" + std::to_string(count));
  }
}

}  // namespace

double brute_kth_neighbor_distance(const EmbeddedPointSet& pts, std::size_t i, std::size_t k) {
  check_k(k, pts.size());
  std::vector<double> dist;
  dist.reserve(pts.size() - 1);
  const auto q = pts.point(i);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j != i) dist.push_back(max_norm_distance(pts.point(j), q));
  }
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
  return dist[k - 1];
}

std::size_t brute_count_within(const EmbeddedPointSet& pts, std::size_t i, double radius) {
  std::size_t count = 0;
  const auto q = pts.point(i);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j != i && max_norm_distance(pts.point(j), q) < radius) ++count;
  }
  return count;
}

// Ascending list of the k smallest distances seen so far.
class NeighborIndex::KBest {
 public:
  explicit KBest(std::size_t k) : k_(k) { dist_.reserve(k + 1); }

  double worst() const { return dist_.size() < k_ ? std::numeric_limits<double>::infinity() : dist_.back(); }

  void offer(double d) {
    if (d >= worst()) return;
    auto it = std::upper_bound(dist_.begin(), dist_.end(), d);
    dist_.insert(it, d);
    if (dist_.size() > k_) dist_.pop_back();
  }

 private:
  std::size_t k_;
  std::vector<double> dist_;
};

NeighborIndex::NeighborIndex(const EmbeddedPointSet& pts, Backend backend, std::size_t leaf_size)
    : backend_(backend), dim_(pts.dim), count_(pts.size()) {
  if (count_ == 0) throw LengthError("neighbor index over an empty point set");
  if (backend_ == Backend::kAuto) {
    if (count_ < kBruteForceThreshold) backend_ = Backend::kBruteForce;
    else backend_ = dim_ == 1 ? Backend::kSorted1d : Backend::kKdTree;
  }
  if (backend_ == Backend::kSorted1d && dim_ != 1) throw DomainError("sorted backend requires one dimension");

  std::vector<std::size_t> order(count_);
  std::iota(order.begin(), order.end(), std::size_t{0});

  if (backend_ == Backend::kSorted1d) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pts.coords[a] < pts.coords[b] || (pts.coords[a] == pts.coords[b] && a < b);
    });
  } else if (backend_ == Backend::kKdTree) {
    // Build on the original coordinates, reordering `order` in place.
    coords_ = pts.coords;  // temporary view for the build
    slot_of_ = std::move(order);
    nodes_.reserve(2 * count_ / std::max<std::size_t>(leaf_size, 1) + 2);
    build(0, count_, std::max<std::size_t>(leaf_size, 1));
    order = std::move(slot_of_);
  }

  coords_.resize(count_ * dim_);
  slot_of_.assign(count_, 0);
  for (std::size_t slot = 0; slot < count_; ++slot) {
    const std::size_t original = order[slot];
    slot_of_[original] = slot;
    std::copy_n(pts.coords.begin() + static_cast<std::ptrdiff_t>(original * dim_), dim_,
                coords_.begin() + static_cast<std::ptrdiff_t>(slot * dim_));
  }
}

// During the build, slot_of_ temporarily holds the slot -> original permutation
// and coords_ holds the original coordinates.
std::size_t NeighborIndex::build(std::size_t begin, std::size_t end, std::size_t leaf_size) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end});
  box_lo_.resize((id + 1) * dim_);
  box_hi_.resize((id + 1) * dim_);

  auto& order = slot_of_;
  for (std::size_t d = 0; d < dim_; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t s = begin; s < end; ++s) {
      const double v = coords_[order[s] * dim_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    box_lo_[id * dim_ + d] = lo;
    box_hi_[id * dim_ + d] = hi;
  }
  if (end - begin <= leaf_size) return id;

  std::size_t split = 0;
  double widest = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double extent = box_hi_[id * dim_ + d] - box_lo_[id * dim_ + d];
    if (extent > widest) {
      widest = extent;
      split = d;
    }
  }
  if (!(widest > 0.0)) return id;  // all points coincide

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(mid),
                   order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                     return coords_[a * dim_ + split] < coords_[b * dim_ + split];
                   });
  const std::size_t left = build(begin, mid, leaf_size);
  const std::size_t right = build(mid, end, leaf_size);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

double NeighborIndex::box_distance(std::size_t node, std::span<const double> q) const {
  const double* lo = box_lo_.data() + node * dim_;
  const double* hi = box_hi_.data() + node * dim_;
  double d = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    d = std::max({d, lo[j] - q[j], q[j] - hi[j]});
  }
  return d;
}

bool NeighborIndex::box_inside(std::size_t node, std::span<const double> q, double radius) const {
  const double* lo = box_lo_.data() + node * dim_;
  const double* hi = box_hi_.data() + node * dim_;
  for (std::size_t j = 0; j < dim_; ++j) {
    if (!(hi[j] - q[j] < radius) || !(q[j] - lo[j] < radius)) return false;
  }
  return true;
}

void NeighborIndex::knn_recurse(std::size_t node, std::span<const double> q, std::size_t self_slot,
                                KBest& best) const {
  const Node& n = nodes_[node];
  if (n.left == 0) {
    for (std::size_t s = n.begin; s < n.end; ++s) {
      if (s != self_slot) best.offer(max_norm_distance(coords_at(s), q));
    }
    return;
  }
  const double dl = box_distance(n.left, q);
  const double dr = box_distance(n.right, q);
  const bool left_first = dl <= dr;
  const std::size_t first = left_first ? n.left : n.right;
  const std::size_t second = left_first ? n.right : n.left;
  if ((left_first ? dl : dr) < best.worst()) knn_recurse(first, q, self_slot, best);
  if ((left_first ? dr : dl) < best.worst()) knn_recurse(second, q, self_slot, best);
}

std::size_t NeighborIndex::count_recurse(std::size_t node, std::span<const double> q, std::size_t self_slot,
                                         double radius) const {
  if (box_distance(node, q) >= radius) return 0;
  const Node& n = nodes_[node];
  if (box_inside(node, q, radius)) {
    const std::size_t contained = n.end - n.begin;
    return (self_slot >= n.begin && self_slot < n.end) ? contained - 1 : contained;
  }
  if (n.left == 0) {
    std::size_t count = 0;
    for (std::size_t s = n.begin; s < n.end; ++s) {
      if (s != self_slot && max_norm_distance(coords_at(s), q) < radius) ++count;
    }
    return count;
  }
  return count_recurse(n.left, q, self_slot, radius) + count_recurse(n.right, q, self_slot, radius);
}

double NeighborIndex::kth_neighbor_distance(std::size_t i, std::size_t k) const {
  check_k(k, count_);
  const std::size_t self = slot_of_[i];
  const auto q = coords_at(self);

  switch (backend_) {
    case Backend::kSorted1d: {
      const double x = q[0];
      std::size_t left = self;   // next candidate is left - 1
      std::size_t right = self + 1;
      double d = 0.0;
      for (std::size_t found = 0; found < k; ++found) {
        const double dl = left > 0 ? std::abs(coords_[left - 1] - x) : std::numeric_limits<double>::infinity();
        const double dr = right < count_ ? std::abs(coords_[right] - x) : std::numeric_limits<double>::infinity();
        if (dl <= dr) {
          d = dl;
          --left;
        } else {
          d = dr;
          ++right;
        }
      }
      return d;
    }
    case Backend::kKdTree: {
      KBest best(k);
      knn_recurse(0, q, self, best);
      return best.worst();
    }
    default: {
      KBest best(k);
      for (std::size_t s = 0; s < count_; ++s) {
        if (s != self) best.offer(max_norm_distance(coords_at(s), q));
      }
      return best.worst();
    }
  }
}

std::size_t NeighborIndex::count_within(std::size_t i, double radius) const {
  if (!(radius > 0.0)) return 0;
  const std::size_t self = slot_of_[i];
  const auto q = coords_at(self);

  switch (backend_) {
    case Backend::kSorted1d: {
      const double x = q[0];
      // |fl(v - x)| < r is monotone in v, so both ends are partition points.
      const auto first = std::partition_point(coords_.begin(), coords_.end(), [&](double v) { return v - x <= -radius; });
      const auto last = std::partition_point(first, coords_.end(), [&](double v) { return v - x < radius; });
      return static_cast<std::size_t>(last - first) - 1;
    }
    case Backend::kKdTree:
      return count_recurse(0, q, self, radius);
    default: {
      std::size_t count = 0;
      for (std::size_t s = 0; s < count_; ++s) {
        if (s != self && max_norm_distance(coords_at(s), q) < radius) ++count;
      }
      return count;
    }
  }
}

}  // namespace ersatz
