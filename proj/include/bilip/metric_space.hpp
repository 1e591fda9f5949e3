// Finite metric spaces: validated distance storage, greedy nets, and the
// doubling / uniform-perfectness diagnostics everything downstream consumes.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace bilip {

using PointId = std::int64_t;

// Immutable after construction; distances live in a packed lower triangle.
// Points are addressed by dense index 0..n-1; user-facing ids are kept
// alongside and drive every tie-break (smallest id wins).
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  // dist_fn is queried once per unordered pair (i < j), in dense indices.
  static FiniteMetricSpace build(std::vector<PointId> ids,
                                 const std::function<double(std::size_t, std::size_t)>& dist_fn,
                                 std::vector<double> weights = {});
  static FiniteMetricSpace from_full_matrix(std::vector<PointId> ids,
                                            const std::vector<std::vector<double>>& matrix,
                                            std::vector<double> weights = {});
  // tri = concatenated rows i of d(i, j) for j < i, length n(n-1)/2.
  static FiniteMetricSpace from_lower_triangle(std::vector<PointId> ids,
                                               std::span<const double> tri,
                                               std::vector<double> weights = {});

  std::size_t size() const { return ids_.size(); }

  double dist(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return i > j ? tri_[i * (i - 1) / 2 + j] : tri_[j * (j - 1) / 2 + i];
  }

  PointId id_of(std::size_t i) const { return ids_[i]; }
  const std::vector<PointId>& ids() const { return ids_; }
  // Dense index for a user id; throws if unknown.
  std::size_t index_of(PointId id) const;

  bool has_weights() const { return !weights_.empty(); }
  double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }

  double diameter() const { return diameter_; }
  // +inf for a single point.
  double min_separation() const { return min_sep_; }

  // Indices sorted so that ids ascend; the canonical scan order.
  const std::vector<std::size_t>& id_order() const { return id_order_; }

 private:
  void finalize();
  void validate_triangle() const;

  std::vector<PointId> ids_;
  std::vector<double> tri_;
  std::vector<double> weights_;
  std::vector<std::size_t> id_order_;
  double diameter_ = 0.0;
  double min_sep_ = std::numeric_limits<double>::infinity();
};

// A restriction of a parent space to a subset of its points, with the
// dense-index mapping back into the parent.
struct Subspace {
  FiniteMetricSpace space;
  std::vector<std::size_t> to_parent;  // subspace index -> parent index
};

Subspace restrict_to(const FiniteMetricSpace& parent, std::vector<std::size_t> keep);

// scale-separated greedy net: centers scanned in id order, every point
// assigned to its nearest center (ties to the smallest center id).
struct Net {
  double scale = 0.0;
  std::vector<std::size_t> centers;     // dense indices, in selection order
  std::vector<std::size_t> assignment;  // point -> dense index of its center
};

Net greedy_net(const FiniteMetricSpace& space, double scale);

// Net restricted to a candidate set (used by the cube hierarchy); returns
// selected candidates only, no assignment.
std::vector<std::size_t> greedy_net_centers(const FiniteMetricSpace& space, double scale,
                                            std::span<const std::size_t> candidates);

struct SpaceDiagnostics {
  double doubling_estimate = 1.0;
  double perfectness_estimate = 1.0;  // A; +inf when some annulus is unfillable
  double diameter = 0.0;
  double min_separation = std::numeric_limits<double>::infinity();
};

// max over sampled (x, r) of mu(B(x,2r)) / mu(B(x,r)), closed balls.
double estimate_doubling(const FiniteMetricSpace& space, std::span<const double> radii);

// Smallest A so every sampled annulus [r/A, r] around every point is
// nonempty. Probes with r < the point's nearest-neighbor distance are
// below the resolution of the finite sample and are skipped; probes with
// r >= diameter are outside the definition's range.
double estimate_uniform_perfectness(const FiniteMetricSpace& space, std::span<const double> radii);

// All pairwise distances (deduplicated) for n <= 500, else a geometric
// ladder between min separation and diameter.
std::vector<double> default_radii(const FiniteMetricSpace& space);

SpaceDiagnostics diagnose(const FiniteMetricSpace& space);

}  // namespace bilip
