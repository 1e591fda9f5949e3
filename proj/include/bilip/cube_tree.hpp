// Hierarchy of nested dyadic-style cubes on a finite metric space, built
// from a cascade of greedy nets whose centers nest level to level.
#pragma once

#include <cstdint>
#include <vector>

#include "bilip/metric_space.hpp"

namespace bilip {

struct Cube {
  int level = 0;            // k; scale is delta^k
  std::size_t index = 0;    // position within its level
  std::size_t center = 0;   // dense point index
  std::vector<std::size_t> members;  // sorted dense indices
  std::int64_t parent = -1;          // global cube id, -1 at the top level
  std::vector<std::int64_t> children;
  double level_scale = 0.0;
};

class CubeTree {
 public:
  double delta = 0.5;
  int k_min = 0, k_max = 0;
  std::vector<Cube> cubes;  // grouped by level, coarse first
  double a0_measured = 1.0;
  double c1_measured = 1.0;

  int level_count() const { return k_max - k_min + 1; }
  double scale_of(int k) const { return scales_[static_cast<std::size_t>(k - k_min)]; }
  const std::vector<std::int64_t>& level(int k) const {
    return level_cubes_[static_cast<std::size_t>(k - k_min)];
  }
  // cube id containing the point at the given level
  std::int64_t cube_at(int k, std::size_t point) const {
    return point_cube_[static_cast<std::size_t>(k - k_min)][point];
  }
  std::size_t point_count() const {
    return point_cube_.empty() ? 0 : point_cube_.front().size();
  }

  friend CubeTree build_cube_tree(const FiniteMetricSpace&, double, int, int);

 private:
  std::vector<double> scales_;
  std::vector<std::vector<std::int64_t>> level_cubes_;
  std::vector<std::vector<std::int64_t>> point_cube_;
};

// Centers cascade fine-to-coarse (level k chosen greedily from level k+1's
// centers), cubes accumulate coarse-to-fine by attaching each finer cube to
// the nearest coarser center, ties to the smallest id.
CubeTree build_cube_tree(const FiniteMetricSpace& space, double delta, int k_min, int k_max);

// Extreme quasiball ratios realized by the tree: a0 = min over cubes of
// (distance from center to nearest excluded point)/delta^k, C1 = max over
// cubes of (farthest member)/delta^k. Vacuous cases report 1.
std::pair<double, double> quasiball_constants(const CubeTree& tree,
                                              const FiniteMetricSpace& space);

const Cube& cube_containing(const CubeTree& tree, const FiniteMetricSpace& space,
                            PointId point, int level);

// Suggested level range: coarsest scale >= diameter, finest below min
// separation plus headroom for the boundary-layer selection downstream.
std::pair<int, int> default_level_range(const FiniteMetricSpace& space, double delta,
                                        int extra_fine = 6);

}  // namespace bilip
