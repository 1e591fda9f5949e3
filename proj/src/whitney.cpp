#include "bilip/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace bilip {

namespace {

constexpr double kSlack = 1e-9;

// layer index: c'*delta^k < dist <= c'*delta^(k-1)
int layer_of(double dist, double c_prime, double delta) {
  int k = static_cast<int>(std::floor(std::log(dist / c_prime) / std::log(delta))) + 1;
  while (c_prime * std::pow(delta, k) >= dist) ++k;
  while (c_prime * std::pow(delta, k - 1) < dist) --k;
  return k;
}

}  // namespace

double whitney_distance_value(double dist, double diam_q, double diam_r,
                              WhitneyDistanceStatus* status) {
  if (dist == 0.0) {
    if (status) *status = WhitneyDistanceStatus::defined;
    return 0.0;
  }
  const double m = std::min(diam_q, diam_r);
  if (m == 0.0) {
    if (status)
      *status = (diam_q == 0.0 && diam_r == 0.0)
                    ? WhitneyDistanceStatus::undefined_both_singletons
                    : WhitneyDistanceStatus::singleton_infinite;
    return std::numeric_limits<double>::infinity();
  }
  if (status) *status = WhitneyDistanceStatus::defined;
  return dist / m;
}

double WhitneyDecomposition::whitney_distance(std::size_t q, std::size_t r,
                                              WhitneyDistanceStatus* status) const {
  if (q == r) {
    if (status) *status = WhitneyDistanceStatus::defined;
    return 0.0;
  }
  return whitney_distance_value(cube_dist(q, r), cubes[q].diam, cubes[r].diam, status);
}

std::vector<std::size_t> WhitneyDecomposition::whitney_ball(std::size_t q, double radius) const {
  std::vector<std::size_t> ball;
  for (std::size_t r = 0; r < cubes.size(); ++r)
    if (r == q || whitney_distance(q, r) < radius) ball.push_back(r);
  return ball;
}

WhitneyDecomposition whitney_decompose(const CubeTree& tree, const Subspace& omega,
                                       const FiniteMetricSpace& space,
                                       const std::vector<std::size_t>& y_full,
                                       const WhitneyParams& params) {
  if (y_full.empty()) throw std::invalid_argument("Y must be nonempty");
  if (omega.space.size() == 0 || omega.space.size() + y_full.size() != space.size())
    throw std::invalid_argument("Omega and Y must partition the space");
  if (tree.point_count() != omega.space.size())
    throw std::invalid_argument("tree was not built on Omega");

  WhitneyDecomposition d;
  d.epsilon = params.epsilon;
  d.delta = tree.delta;
  d.c1 = tree.c1_measured;
  d.a0 = tree.a0_measured;
  d.c_prime = 4.0 * tree.c1_measured;
  d.perfectness = estimate_uniform_perfectness(space, default_radii(space));
  d.comparability_bound = 4.0 * tree.c1_measured * d.perfectness / tree.delta;
  d.boundary = y_full;
  std::sort(d.boundary.begin(), d.boundary.end());

  const std::size_t n = space.size();
  if (!params.boundary_distance.empty()) {
    if (params.boundary_distance.size() != n)
      throw std::invalid_argument("boundary_distance size mismatch");
    d.dist_to_y = params.boundary_distance;
    for (std::size_t y : d.boundary)
      if (d.dist_to_y[y] != 0.0)
        throw std::invalid_argument("boundary_distance must vanish on Y");
  } else {
    d.dist_to_y.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      if (std::binary_search(d.boundary.begin(), d.boundary.end(), p)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y : d.boundary) best = std::min(best, space.dist(p, y));
      d.dist_to_y[p] = best;
    }
  }

  // layer per Omega point, in tree (subspace) indexing
  const std::size_t m = omega.space.size();
  std::vector<int> layer(m);
  int k_lo = tree.k_min, k_hi = tree.k_max;
  for (std::size_t i = 0; i < m; ++i) {
    const int k = layer_of(d.dist_to_y[omega.to_parent[i]], d.c_prime, tree.delta);
    k_lo = std::min(k_lo, k);
    k_hi = std::max(k_hi, k);
    layer[i] = k;
  }
  if (k_lo < tree.k_min || k_hi > tree.k_max)
    throw LayerRangeError("tree levels [" + std::to_string(tree.k_min) + ", " +
                              std::to_string(tree.k_max) +
                              "] do not cover the boundary layer range [" +
                              std::to_string(k_lo) + ", " + std::to_string(k_hi) + "]",
                          k_lo, k_hi);

  // initial selection: a cube is in M0 iff some member sits in its level's layer
  std::vector<char> in_m0(tree.cubes.size(), 0);
  for (std::size_t i = 0; i < m; ++i) in_m0[tree.cube_at(layer[i], i)] = 1;

  // maximal cubes of M0 under containment = no proper ancestor in M0
  std::vector<std::int64_t> selected;
  for (std::size_t c = 0; c < tree.cubes.size(); ++c) {
    if (!in_m0[c]) continue;
    bool maximal = true;
    for (std::int64_t a = tree.cubes[c].parent; a >= 0; a = tree.cubes[a].parent)
      if (in_m0[a]) {
        maximal = false;
        break;
      }
    if (maximal) selected.push_back(static_cast<std::int64_t>(c));
  }

  auto make_cube = [&](std::int64_t tc) {
    WhitneyCube w;
    w.tree_cube = tc;
    w.level = tree.cubes[tc].level;
    w.level_scale = tree.cubes[tc].level_scale;
    w.center = omega.to_parent[tree.cubes[tc].center];
    w.members.reserve(tree.cubes[tc].members.size());
    for (std::size_t i : tree.cubes[tc].members) w.members.push_back(omega.to_parent[i]);
    std::sort(w.members.begin(), w.members.end());
    double diam = 0.0;
    for (std::size_t a = 0; a < w.members.size(); ++a)
      for (std::size_t b = a + 1; b < w.members.size(); ++b)
        diam = std::max(diam, space.dist(w.members[a], w.members[b]));
    w.diam = diam;
    double dy = std::numeric_limits<double>::infinity();
    for (std::size_t p : w.members) dy = std::min(dy, d.dist_to_y[p]);
    w.dist_to_y = dy;
    if (w.members.size() > 1) {
      const bool lower_ok = w.diam <= w.dist_to_y * (1.0 + kSlack);
      const bool upper_ok = w.dist_to_y <= d.comparability_bound * w.diam * (1.0 + kSlack);
      w.violates_whitney = !(lower_ok && upper_ok);
    }
    return w;
  };

  for (std::int64_t tc : selected) {
    WhitneyCube w = make_cube(tc);
    if (w.violates_whitney && params.relevel_violations && !tree.cubes[tc].children.empty()) {
      for (std::int64_t child : tree.cubes[tc].children) d.cubes.push_back(make_cube(child));
    } else {
      d.cubes.push_back(std::move(w));
    }
  }

  // deterministic order: coarse levels first, then by center id
  std::sort(d.cubes.begin(), d.cubes.end(), [&space](const WhitneyCube& a, const WhitneyCube& b) {
    if (a.level != b.level) return a.level < b.level;
    return space.id_of(a.center) < space.id_of(b.center);
  });

  // coverage and disjointness
  d.point_cube.assign(n, -1);
  for (std::size_t q = 0; q < d.cubes.size(); ++q)
    for (std::size_t p : d.cubes[q].members) {
      if (d.point_cube[p] != -1)
        throw std::runtime_error("selected cubes overlap at point id " +
                                 std::to_string(space.id_of(p)));
      d.point_cube[p] = static_cast<std::int64_t>(q);
    }
  for (std::size_t i = 0; i < m; ++i)
    if (d.point_cube[omega.to_parent[i]] == -1)
      throw std::runtime_error("point id " +
                               std::to_string(space.id_of(omega.to_parent[i])) +
                               " not covered by the selection");

  d.rebuild_geometry_caches(space);
  return d;
}

void WhitneyDecomposition::rebuild_geometry_caches(const FiniteMetricSpace& space) {
  const std::size_t nc = cubes.size();
  const std::size_t n = space.size();

  cube_dist_.assign(nc * nc, std::numeric_limits<double>::infinity());
  for (std::size_t p = 0; p < n; ++p) {
    if (point_cube[p] < 0) continue;
    const std::size_t cp = static_cast<std::size_t>(point_cube[p]);
    for (std::size_t q = p + 1; q < n; ++q) {
      if (point_cube[q] < 0) continue;
      const std::size_t cq = static_cast<std::size_t>(point_cube[q]);
      if (cp == cq) continue;
      const double dd = space.dist(p, q);
      double& slot = cube_dist_[cp * nc + cq];
      if (dd < slot) {
        slot = dd;
        cube_dist_[cq * nc + cp] = dd;
      }
    }
  }

  // Q*: relative-gap neighbors; singletons only join at gap 0, which cannot
  // occur between disjoint finite sets, so they stay isolated. Lattice
  // instances routinely realize dist == epsilon * min diam exactly, and that
  // tie must not flip with rounding, so the comparison carries a hair of
  // slack on the inclusive side.
  star.assign(nc, {});
  for (std::size_t q = 0; q < nc; ++q) {
    star[q].push_back(q);
    for (std::size_t r = 0; r < nc; ++r) {
      if (r == q) continue;
      const double gap = cube_dist(q, r);
      const double md = std::min(cubes[q].diam, cubes[r].diam);
      if (gap < epsilon * md * (1.0 + 1e-9) || gap == 0.0) star[q].push_back(r);
    }
    std::sort(star[q].begin(), star[q].end());
  }
  star2.assign(nc, {});
  for (std::size_t q = 0; q < nc; ++q) {
    std::set<std::size_t> acc;
    for (std::size_t r : star[q]) acc.insert(star[r].begin(), star[r].end());
    star2[q].assign(acc.begin(), acc.end());
  }

  auto collect_points = [&](const std::vector<std::size_t>& cube_set) {
    std::vector<std::size_t> pts;
    for (std::size_t c : cube_set)
      pts.insert(pts.end(), cubes[c].members.begin(), cubes[c].members.end());
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  star_points_.resize(nc);
  star2_points_.resize(nc);
  star_mask_.assign(nc, std::vector<char>(n, 0));
  star2_mask_.assign(nc, std::vector<char>(n, 0));
  for (std::size_t q = 0; q < nc; ++q) {
    star_points_[q] = collect_points(star[q]);
    star2_points_[q] = collect_points(star2[q]);
    for (std::size_t p : star_points_[q]) star_mask_[q][p] = 1;
    for (std::size_t p : star2_points_[q]) star2_mask_[q][p] = 1;
  }
}

bool diam_comparability_check(const WhitneyDecomposition& d, std::size_t q, std::size_t r) {
  if (q == r) return true;
  const double bound = d.comparability_bound + 1.0 + d.epsilon;
  const double dq = d.cubes[q].diam, dr = d.cubes[r].diam;
  return dq <= bound * dr * (1.0 + kSlack) && dr <= bound * dq * (1.0 + kSlack);
}

double cutoff_value(double dist_to_complement, double gap) {
  if (std::isinf(gap)) return 1.0;  // X \ Q** empty
  return std::min(1.0, dist_to_complement / gap);
}

double CutoffFamily::eval(const WhitneyDecomposition& decomp, const FiniteMetricSpace& space,
                          std::size_t q, std::size_t x) const {
  if (std::isinf(gap[q])) return 1.0;
  if (!decomp.in_star2_points(q, x)) return 0.0;
  double dc = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < space.size(); ++p)
    if (!decomp.in_star2_points(q, p)) dc = std::min(dc, space.dist(x, p));
  return cutoff_value(dc, gap[q]);
}

CutoffFamily build_cutoffs(const WhitneyDecomposition& decomp, const FiniteMetricSpace& space) {
  CutoffFamily f;
  const std::size_t nc = decomp.cube_count();
  const std::size_t n = space.size();
  f.gap.assign(nc, std::numeric_limits<double>::infinity());
  for (std::size_t q = 0; q < nc; ++q) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t a : decomp.star_points(q))
      for (std::size_t p = 0; p < n; ++p)
        if (!decomp.in_star2_points(q, p)) g = std::min(g, space.dist(a, p));
    f.gap[q] = g;
    if (decomp.cubes[q].diam > 0.0 && std::isfinite(g))
      f.min_gap_over_diam = std::min(f.min_gap_over_diam, g / decomp.cubes[q].diam);
  }
  return f;
}

int color_cubes(WhitneyDecomposition& d, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  const std::size_t nc = d.cube_count();
  d.rho = rho;
  d.colors.assign(nc, 0);

  std::vector<std::vector<std::size_t>> near(nc);
  std::size_t max_ball = 0;
  for (std::size_t q = 0; q < nc; ++q) {
    for (std::size_t r = 0; r < nc; ++r)
      if (r != q && d.whitney_distance(q, r) < rho) near[q].push_back(r);
    max_ball = std::max(max_ball, near[q].size() + 1);
  }
  d.max_ball_cardinality = max_ball;

  int used = 0;
  std::vector<char> forbidden;
  for (std::size_t q = 0; q < nc; ++q) {  // decomposition order is deterministic
    forbidden.assign(used + 2, 0);
    auto mark = [&](std::size_t r) {
      if (d.colors[r] > 0 && d.colors[r] < static_cast<int>(forbidden.size()))
        forbidden[d.colors[r]] = 1;
    };
    for (std::size_t r : near[q]) {
      mark(r);
      for (std::size_t s : near[r]) mark(s);  // two-hop rule
    }
    int c = 1;
    while (c < static_cast<int>(forbidden.size()) && forbidden[c]) ++c;
    d.colors[q] = c;
    used = std::max(used, c);
  }
  d.color_count = used;

  for (std::size_t q = 0; q < nc; ++q)
    for (std::size_t r : near[q])
      if (d.colors[q] == d.colors[r])
        throw std::runtime_error("coloring validity failed for cubes " + std::to_string(q) +
                                 ", " + std::to_string(r));
  return used;
}

}  // namespace bilip
