#include "bilip/cube_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bilip {

CubeTree build_cube_tree(const FiniteMetricSpace& space, double delta, int k_min, int k_max) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
  if (k_min > k_max) throw std::invalid_argument("empty level range");
  const std::size_t n = space.size();
  const int levels = k_max - k_min + 1;

  CubeTree tree;
  tree.delta = delta;
  tree.k_min = k_min;
  tree.k_max = k_max;
  tree.scales_.resize(levels);
  for (int k = k_min; k <= k_max; ++k)
    tree.scales_[k - k_min] = std::pow(delta, static_cast<double>(k));

  // Center sets, finest level first; nesting by construction.
  std::vector<std::vector<std::size_t>> centers(levels);
  {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const double finest = tree.scales_[levels - 1];
    if (finest <= space.min_separation()) {
      // every point is its own center; equivalent to the greedy outcome
      centers[levels - 1] = space.id_order();
    } else {
      centers[levels - 1] = greedy_net_centers(space, finest, all);
    }
    for (int li = levels - 2; li >= 0; --li)
      centers[li] = greedy_net_centers(space, tree.scales_[li], centers[li + 1]);
  }

  tree.level_cubes_.resize(levels);
  tree.point_cube_.assign(levels, std::vector<std::int64_t>(n, -1));

  // Finest level: members by nearest-center assignment over all points.
  {
    const int li = levels - 1;
    const auto& cs = centers[li];
    std::vector<std::int64_t> center_cube(n, -1);
    for (std::size_t c : cs) {
      const std::int64_t id = static_cast<std::int64_t>(tree.cubes.size());
      Cube cube;
      cube.level = k_max;
      cube.index = tree.level_cubes_[li].size();
      cube.center = c;
      cube.level_scale = tree.scales_[li];
      tree.cubes.push_back(std::move(cube));
      tree.level_cubes_[li].push_back(id);
      center_cube[c] = id;
    }
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t best = cs.front();
      double best_d = space.dist(p, best);
      for (std::size_t c : cs) {
        const double d = space.dist(p, c);
        if (d < best_d || (d == best_d && space.id_of(c) < space.id_of(best))) {
          best = c;
          best_d = d;
        }
      }
      const std::int64_t id = center_cube[best];
      tree.cubes[id].members.push_back(p);
      tree.point_cube_[li][p] = id;
    }
    for (std::int64_t id : tree.level_cubes_[li])
      std::sort(tree.cubes[id].members.begin(), tree.cubes[id].members.end());
  }

  // Coarser levels: attach each finer cube to the nearest coarser center.
  for (int li = levels - 2; li >= 0; --li) {
    const auto& cs = centers[li];
    std::vector<std::int64_t> center_cube(n, -1);
    for (std::size_t c : cs) {
      const std::int64_t id = static_cast<std::int64_t>(tree.cubes.size());
      Cube cube;
      cube.level = k_min + li;
      cube.index = tree.level_cubes_[li].size();
      cube.center = c;
      cube.level_scale = tree.scales_[li];
      tree.cubes.push_back(std::move(cube));
      tree.level_cubes_[li].push_back(id);
      center_cube[c] = id;
    }
    for (std::int64_t child_id : tree.level_cubes_[li + 1]) {
      Cube& child = tree.cubes[child_id];
      std::size_t best = cs.front();
      double best_d = space.dist(child.center, best);
      for (std::size_t c : cs) {
        const double d = space.dist(child.center, c);
        if (d < best_d || (d == best_d && space.id_of(c) < space.id_of(best))) {
          best = c;
          best_d = d;
        }
      }
      const std::int64_t pid = center_cube[best];
      child.parent = pid;
      tree.cubes[pid].children.push_back(child_id);
      tree.cubes[pid].members.insert(tree.cubes[pid].members.end(), child.members.begin(),
                                     child.members.end());
    }
    for (std::int64_t id : tree.level_cubes_[li]) {
      auto& m = tree.cubes[id].members;
      std::sort(m.begin(), m.end());
      for (std::size_t p : m) tree.point_cube_[li][p] = id;
    }
  }

  auto [a0, c1] = quasiball_constants(tree, space);
  tree.a0_measured = a0;
  tree.c1_measured = c1;
  return tree;
}

std::pair<double, double> quasiball_constants(const CubeTree& tree,
                                              const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  double a0 = std::numeric_limits<double>::infinity();
  double c1 = 0.0;
  bool any_a0 = false, any_c1 = false;
  for (const Cube& q : tree.cubes) {
    if (q.members.size() > 1) {
      double far = 0.0;
      for (std::size_t p : q.members) far = std::max(far, space.dist(q.center, p));
      c1 = std::max(c1, far / q.level_scale);
      any_c1 = true;
    }
    if (q.members.size() < n) {
      double near = std::numeric_limits<double>::infinity();
      auto it = q.members.begin();
      for (std::size_t p = 0; p < n; ++p) {
        if (it != q.members.end() && *it == p) {
          ++it;
          continue;
        }
        near = std::min(near, space.dist(q.center, p));
      }
      a0 = std::min(a0, near / q.level_scale);
      any_a0 = true;
    }
  }
  return {any_a0 ? a0 : 1.0, any_c1 ? c1 : 1.0};
}

const Cube& cube_containing(const CubeTree& tree, const FiniteMetricSpace& space,
                            PointId point, int level) {
  if (level < tree.k_min || level > tree.k_max)
    throw std::invalid_argument("level " + std::to_string(level) + " outside tree range");
  const std::size_t p = space.index_of(point);
  return tree.cubes[tree.cube_at(level, p)];
}

std::pair<int, int> default_level_range(const FiniteMetricSpace& space, double delta,
                                        int extra_fine) {
  const double diam = std::max(space.diameter(), 1e-300);
  const double logd = std::log(1.0 / delta);
  int k_min = static_cast<int>(std::floor(std::log(1.0 / diam) / logd));
  while (std::pow(delta, k_min) < diam) --k_min;
  int k_max = k_min;
  if (std::isfinite(space.min_separation())) {
    const double sep = space.min_separation();
    k_max = static_cast<int>(std::ceil(std::log(1.0 / sep) / logd)) + extra_fine;
    while (std::pow(delta, k_max) > sep) ++k_max;
  }
  if (k_max - k_min > 256) throw std::runtime_error("level range exceeds 256 levels");
  return {k_min, k_max};
}

}  // namespace bilip
