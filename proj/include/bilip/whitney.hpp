// Boundary-layer cube selection over Omega = X \ Y, the Q*/Q** halos,
// Lipschitz cutoffs, the relative Whitney distance, and the two-hop greedy
// coloring that keeps nearby cubes in distinct color blocks.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilip/cube_tree.hpp"
#include "bilip/metric_space.hpp"

namespace bilip {

struct WhitneyCube {
  std::int64_t tree_cube = -1;
  int level = 0;
  double level_scale = 0.0;
  std::size_t center = 0;                // full-space dense index
  std::vector<std::size_t> members;      // full-space dense indices, sorted
  double diam = 0.0;                     // 0 for singletons
  double dist_to_y = 0.0;
  bool violates_whitney = false;         // upper comparability bound
};

enum class WhitneyDistanceStatus { defined, singleton_infinite, undefined_both_singletons };

struct WhitneyParams {
  double epsilon = 0.5;
  bool relevel_violations = false;  // replace a violating cube by its children (one level)
  // optional exact boundary distance per full-space point (must vanish on Y
  // and be 1-Lipschitz); empty = min over Y of the space metric
  std::vector<double> boundary_distance;
};

class WhitneyDecomposition {
 public:
  double c_prime = 0.0;              // layer constant, 4*C1
  double comparability_bound = 0.0;  // 4*C1*A/delta
  double c1 = 1.0, a0 = 1.0, perfectness = 1.0, delta = 0.5;
  double epsilon = 0.5;
  std::vector<WhitneyCube> cubes;
  std::vector<std::size_t> boundary;       // Y, full-space dense indices, sorted
  std::vector<double> dist_to_y;           // per full-space point (0 on Y)
  std::vector<std::int64_t> point_cube;    // full-space point -> cube index, -1 on Y
  std::vector<std::vector<std::size_t>> star, star2;  // cube index sets, sorted

  // coloring (filled by color_cubes)
  std::vector<int> colors;  // 1-based
  int color_count = 0;
  double rho = 0.0;
  std::size_t max_ball_cardinality = 0;  // m, center included

  std::size_t cube_count() const { return cubes.size(); }
  double cube_dist(std::size_t q, std::size_t r) const {
    return q == r ? 0.0 : cube_dist_[q * cubes.size() + r];
  }
  double whitney_distance(std::size_t q, std::size_t r,
                          WhitneyDistanceStatus* status = nullptr) const;
  std::vector<std::size_t> whitney_ball(std::size_t q, double radius) const;

  // Point sets of the halos (sorted full-space indices).
  const std::vector<std::size_t>& star_points(std::size_t q) const { return star_points_[q]; }
  const std::vector<std::size_t>& star2_points(std::size_t q) const { return star2_points_[q]; }
  bool in_star_points(std::size_t q, std::size_t p) const { return star_mask_[q][p]; }
  bool in_star2_points(std::size_t q, std::size_t p) const { return star2_mask_[q][p]; }

  friend WhitneyDecomposition whitney_decompose(const CubeTree&, const Subspace&,
                                                const FiniteMetricSpace&,
                                                const std::vector<std::size_t>&,
                                                const WhitneyParams&);
  void rebuild_geometry_caches(const FiniteMetricSpace& space);  // also used after IO load

 private:
  std::vector<double> cube_dist_;  // dense cube-pair min distances
  std::vector<std::vector<std::size_t>> star_points_, star2_points_;
  std::vector<std::vector<char>> star_mask_, star2_mask_;
};

// Scalar form of the relative distance; +inf when a singleton is involved
// and the gap is positive, 0 whenever the gap is 0.
double whitney_distance_value(double dist, double diam_q, double diam_r,
                              WhitneyDistanceStatus* status = nullptr);

// Thrown when the tree's level range cannot host every boundary layer;
// carries the range that would.
struct LayerRangeError : std::runtime_error {
  int k_lo, k_hi;
  LayerRangeError(const std::string& what, int lo, int hi)
      : std::runtime_error(what), k_lo(lo), k_hi(hi) {}
};

// tree must be built on the subspace Omega = X \ Y.
WhitneyDecomposition whitney_decompose(const CubeTree& tree, const Subspace& omega,
                                       const FiniteMetricSpace& space,
                                       const std::vector<std::size_t>& y_full,
                                       const WhitneyParams& params = {});

// Test oracle for the diameter comparability of neighbors in a star.
bool diam_comparability_check(const WhitneyDecomposition& decomp, std::size_t q, std::size_t r);

// Cutoff family phi_Q(x) = min(1, dist(x, X \ Q**) / dist(Q*, X \ Q**)).
class CutoffFamily {
 public:
  std::vector<double> gap;  // dist(Q*, X \ Q**); +inf when the complement is empty
  double eval(const WhitneyDecomposition& decomp, const FiniteMetricSpace& space,
              std::size_t q, std::size_t x) const;
  // measured min over cubes with diam > 0 of gap / diam (Lipschitz headroom)
  double min_gap_over_diam = std::numeric_limits<double>::infinity();
};

double cutoff_value(double dist_to_complement, double gap);

CutoffFamily build_cutoffs(const WhitneyDecomposition& decomp, const FiniteMetricSpace& space);

// Greedy two-hop coloring at radius rho; returns the number of colors and
// fills decomp.colors. Throws if the result fails the one-hop validity scan.
int color_cubes(WhitneyDecomposition& decomp, double rho);

}  // namespace bilip
