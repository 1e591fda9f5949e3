#include "bilip/grushin.hpp"

#include <algorithm>
#define _USE_MATH_DEFINES
#include <cmath>
#include <array>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace bilip {

CcBounds cc_bounds(GrushinPoint p, GrushinPoint q) {
  const double dx = std::abs(p.x - q.x);
  const double dy = std::abs(p.y - q.y);
  CcBounds b;
  b.upper = 4.0 * (dx + std::sqrt(dy));
  if (dy == 0.0) {
    b.lower = 0.5 * dx;
  } else {
    const double m = std::min(std::abs(p.x), std::abs(q.x));
    b.lower = 0.5 * (dx + dy / std::sqrt(m * m + 4.0 * dy));
  }
  return b;
}

double dist_to_axis(GrushinPoint p) { return std::abs(p.x); }

GrushinPoint dilate(GrushinPoint p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  return {lambda * p.x, lambda * lambda * p.y};
}

namespace {

// axis-anchored half-offset ladder covering [lo, hi]
std::vector<double> anchored_ladder(double lo, double hi, double h) {
  const long k0 = static_cast<long>(std::ceil(lo / h - 0.5));
  const long k1 = static_cast<long>(std::floor(hi / h - 0.5));
  std::vector<double> out;
  for (long k = k0; k <= k1; ++k) out.push_back((static_cast<double>(k) + 0.5) * h);
  return out;
}

}  // namespace

GrushinGrid::GrushinGrid(GrushinWindow window, int nx, int ny) : window_(window) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs nx, ny >= 2");
  if (!(window.x1 > window.x0) || !(window.y1 > window.y0))
    throw std::invalid_argument("empty grid window");
  hx_ = (window.x1 - window.x0) / nx;
  hy_ = (window.y1 - window.y0) / ny;
  xs_ = anchored_ladder(window.x0, window.x1, hx_);
  ys_ = anchored_ladder(window.y0, window.y1, hy_);
  if (xs_.empty() || ys_.empty()) throw std::invalid_argument("window too small for the grid");
  for (double x : xs_)
    if (std::abs(x) < 0.5 * hx_ * (1.0 - 1e-12))
      throw std::runtime_error("grid node on the singular axis");
}

std::size_t GrushinGrid::snap(GrushinPoint p) const {
  auto nearest = [](const std::vector<double>& v, double t) {
    auto it = std::lower_bound(v.begin(), v.end(), t);
    if (it == v.end()) return v.size() - 1;
    if (it == v.begin()) return std::size_t{0};
    const std::size_t hi = static_cast<std::size_t>(it - v.begin());
    return (t - v[hi - 1]) <= (v[hi] - t) ? hi - 1 : hi;
  };
  return nearest(xs_, p.x) * ys_.size() + nearest(ys_, p.y);
}

std::vector<double> GrushinGrid::distances_from(std::size_t source) const {
  const std::size_t nyc = ys_.size();
  const std::size_t n = node_count();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  const long nxc = static_cast<long>(xs_.size());
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    const long ix = static_cast<long>(v / nyc);
    const long iy = static_cast<long>(v % nyc);
    const double xa = xs_[ix], ya = ys_[iy];
    for (long dxi = -1; dxi <= 1; ++dxi)
      for (long dyi = -1; dyi <= 1; ++dyi) {
        if (dxi == 0 && dyi == 0) continue;
        const long jx = ix + dxi, jy = iy + dyi;
        if (jx < 0 || jx >= nxc || jy < 0 || jy >= static_cast<long>(nyc)) continue;
        const double xb = xs_[jx], yb = ys_[jy];
        const double dx = xb - xa, dy = yb - ya;
        const double xm = 0.5 * (std::abs(xa) + std::abs(xb));
        const double w = std::sqrt(dx * dx + (dy * dy) / (xm * xm));
        const std::size_t u = static_cast<std::size_t>(jx) * nyc + static_cast<std::size_t>(jy);
        const double nd = d + w;
        if (nd < dist[u]) {
          dist[u] = nd;
          heap.push({nd, u});
        }
      }
  }
  return dist;
}

double GrushinGrid::distance_nodes(std::size_t a, std::size_t b) const {
  if (a == b) return 0.0;
  const double d = distances_from(a)[b];
  if (!std::isfinite(d)) throw std::runtime_error("grid graph is disconnected");
  return d;
}

double GrushinGrid::distance(GrushinPoint a, GrushinPoint b) const {
  return distance_nodes(snap(a), snap(b));
}

GrushinGrid::BracketCheck GrushinGrid::distance_checked(GrushinPoint a, GrushinPoint b,
                                                        double tol) const {
  BracketCheck c;
  c.value = distance(a, b);
  const CcBounds bounds = cc_bounds(a, b);
  c.lower = bounds.lower;
  c.upper = bounds.upper;
  c.within = c.value >= bounds.lower * (1.0 - tol) && c.value <= bounds.upper * (1.0 + tol);
  return c;
}

std::vector<GrushinMeshCube> build_grushin_mesh(int j_min, int j_max, GrushinWindow window) {
  if (j_min > j_max) throw std::invalid_argument("empty level range");
  std::vector<GrushinMeshCube> mesh;
  auto inner_abs = [](long ix) { return ix >= 0 ? ix : -(ix + 1); };
  for (int j = j_min; j <= j_max; ++j) {
    const double sx = std::ldexp(1.0, -j);
    const double sy = std::ldexp(1.0, -2 * j);
    const long ix_lo = static_cast<long>(std::floor(window.x0 / sx));
    const long ix_hi = static_cast<long>(std::ceil(window.x1 / sx));
    for (long ix = ix_lo; ix < ix_hi; ++ix) {
      if (inner_abs(ix) < 1) continue;  // touches the axis
      // drop columns whose selected ancestor already covers them
      bool covered = false;
      for (int ja = j - 1; ja >= j_min && !covered; --ja) {
        const long anc = ix >= 0 ? (ix >> (j - ja)) : -((-(ix + 1) >> (j - ja)) + 1);
        if (inner_abs(anc) >= 1) covered = true;
      }
      if (covered) continue;
      const double cx0 = ix * sx, cx1 = (ix + 1) * sx;
      if (cx0 < window.x0 || cx1 > window.x1) continue;  // clip partial columns
      const long iy_lo = static_cast<long>(std::ceil(window.y0 / sy));
      const long iy_hi = static_cast<long>(std::floor(window.y1 / sy));
      for (long iy = iy_lo; iy < iy_hi; ++iy) {
        GrushinMeshCube c;
        c.level = j;
        c.ix = ix;
        c.iy = iy;
        c.x0 = cx0;
        c.x1 = cx1;
        c.y0 = iy * sy;
        c.y1 = (iy + 1) * sy;
        c.dist_cc = std::min(std::abs(cx0), std::abs(cx1));
        c.diam_upper = 4.0 * (sx + std::sqrt(sy));
        double lower = sx;  // horizontal segments realize their length
        const GrushinPoint corners[4] = {{c.x0, c.y0}, {c.x0, c.y1}, {c.x1, c.y0}, {c.x1, c.y1}};
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b)
            lower = std::max(lower, cc_bounds(corners[a], corners[b]).lower);
        c.diam_lower = lower;
        mesh.push_back(c);
      }
    }
  }
  if (mesh.empty()) throw std::runtime_error("mesh selection is empty for this window");
  return mesh;
}

GrushinSample build_grushin_sample(GrushinWindow window, int nx, int ny, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  GrushinSample s{GrushinGrid(window, nx, ny), {}, {}, {}, {}};
  const GrushinGrid& grid = s.grid;

  // mirrored stride keeps the innermost node column on both sides of the axis
  const std::size_t nyc = grid.y_count();
  std::vector<std::size_t> kept_x, kept_y;
  auto mirrored_keep = [stride](double v, double h) {
    const long k = static_cast<long>(std::llround(v / h - 0.5));
    const long m = k >= 0 ? k : -k - 1;
    return m % stride == 0;
  };
  for (std::size_t i = 0; i < grid.x_count(); ++i)
    if (mirrored_keep(grid.node(i * nyc).x, grid.hx())) kept_x.push_back(i);
  for (std::size_t j = 0; j < nyc; ++j)
    if (mirrored_keep(grid.node(j).y, grid.hy())) kept_y.push_back(j);

  for (std::size_t ix : kept_x)
    for (std::size_t iy : kept_y) s.node_of.push_back(ix * nyc + iy);

  const std::size_t n = s.node_of.size();
  s.coords.reserve(n);
  for (std::size_t v : s.node_of) {
    const GrushinPoint p = grid.node(v);
    s.coords.push_back({p.x, p.y});
  }

  // all-pairs oracle distances: one shortest-path sweep per sample point
  std::vector<double> tri(n * (n - 1) / 2);
  for (std::size_t i = 1; i < n; ++i) {
    const auto row = grid.distances_from(s.node_of[i]);
    for (std::size_t j = 0; j < i; ++j) tri[i * (i - 1) / 2 + j] = row[s.node_of[j]];
  }
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  s.space = FiniteMetricSpace::from_lower_triangle(std::move(ids), tri);

  // one-sided axis band: the innermost sampled column on the positive side
  // (or the innermost overall for one-sided windows). Taking both signs
  // would put near-duplicate pairs into Y whose cc distance (2|x|) shrinks
  // much faster than the snowflaked plane distance, which breaks the
  // comparability the axis embedding relies on.
  double band_x = std::numeric_limits<double>::infinity();
  bool have_positive = false;
  for (const auto& c : s.coords)
    if (c[0] > 0.0) {
      have_positive = true;
      band_x = std::min(band_x, c[0]);
    }
  if (!have_positive)
    for (const auto& c : s.coords) band_x = std::min(band_x, std::abs(c[0]));
  for (std::size_t p = 0; p < n; ++p) {
    const double x = have_positive ? s.coords[p][0] : std::abs(s.coords[p][0]);
    if (x > 0.0 && std::abs(x - band_x) <= band_x * 1e-12) s.axis_band.push_back(p);
  }
  return s;
}

std::vector<double> axis_band_distances(const GrushinSample& sample) {
  std::vector<double> out(sample.space.size(), 0.0);
  double band_x = std::numeric_limits<double>::infinity();
  for (std::size_t y : sample.axis_band)
    band_x = std::min(band_x, std::abs(sample.coords[y][0]));
  const double floor = 0.5 * sample.grid.hx();
  std::vector<char> in_band(sample.space.size(), 0);
  for (std::size_t y : sample.axis_band) in_band[y] = 1;
  for (std::size_t p = 0; p < sample.space.size(); ++p) {
    if (in_band[p]) continue;
    out[p] = std::max(std::abs(sample.coords[p][0]) - band_x, floor);
  }
  return out;
}

PatchAtlas atlas_from_grushin_charts(const GrushinSample& sample,
                                     const WhitneyDecomposition& decomp,
                                     ChartAtlasStats* stats, const ChartAtlasOptions& opts) {
  const FiniteMetricSpace& space = sample.space;
  const std::size_t nc = decomp.cube_count();

  // ball covers of every Q** first; the budget N is the uniform maximum
  std::vector<std::vector<std::size_t>> covers(nc);
  std::size_t budget = 0;
  for (std::size_t q = 0; q < nc; ++q) {
    const auto& pts = decomp.star2_points(q);
    const double r = decomp.cubes[q].diam > 0.0 ? decomp.cubes[q].diam
                                                : decomp.cubes[q].level_scale;
    if (pts.size() == 1) {
      covers[q] = {pts.front()};
    } else {
      covers[q] = greedy_net_centers(space, r, pts);
    }
    budget = std::max(budget, covers[q].size());
  }
  if (opts.ball_budget > 0) {
    if (budget > opts.ball_budget)
      throw std::runtime_error("covering failure: " + std::to_string(budget) +
                               " balls exceed the budget " +
                               std::to_string(opts.ball_budget));
    budget = opts.ball_budget;
  }

  PatchAtlas atlas;
  atlas.m2 = 4 * budget;
  atlas.patches.resize(nc);
  double min_bilip = std::numeric_limits<double>::infinity(), max_bilip = 1.0;
  bool any = false;

  for (std::size_t q = 0; q < nc; ++q) {
    RawPatch& patch = atlas.patches[q];
    patch.points = decomp.star2_points(q);
    const double r = decomp.cubes[q].diam > 0.0 ? decomp.cubes[q].diam
                                                : decomp.cubes[q].level_scale;
    const std::size_t nb = covers[q].size();
    patch.values.assign(patch.points.size(), std::vector<double>(atlas.m2, 0.0));

    for (std::size_t i = 0; i < nb; ++i) {
      const std::size_t center = covers[q][i];
      const double cx = sample.coords[center][0];
      const double cy = sample.coords[center][1];
      // chart on 5B_i; balance the chart scale so its expansion and
      // contraction against the oracle metric meet in the middle
      std::vector<std::pair<std::size_t, std::array<double, 2>>> in_ball;
      for (std::size_t row = 0; row < patch.points.size(); ++row) {
        const std::size_t p = patch.points[row];
        if (space.dist(p, center) > 5.0 * r) continue;
        in_ball.push_back(
            {row, {sample.coords[p][0] - cx, (sample.coords[p][1] - cy) / cx}});
      }
      double exp_i = 0.0, con_i = 0.0;
      for (std::size_t a = 0; a < in_ball.size(); ++a)
        for (std::size_t b = a + 1; b < in_ball.size(); ++b) {
          const double du = in_ball[a].second[0] - in_ball[b].second[0];
          const double dv = in_ball[a].second[1] - in_ball[b].second[1];
          const double img = std::sqrt(du * du + dv * dv);
          const double d =
              space.dist(patch.points[in_ball[a].first], patch.points[in_ball[b].first]);
          if (img > 0.0 && d > 0.0) {
            exp_i = std::max(exp_i, img / d);
            con_i = std::max(con_i, d / img);
          }
        }
      const double alpha = (exp_i > 0.0 && con_i > 0.0) ? std::sqrt(con_i / exp_i) : 1.0;

      double reach = 0.0;
      for (const auto& [row, uv] : in_ball)
        reach = std::max(reach, alpha * std::sqrt(uv[0] * uv[0] + uv[1] * uv[1]));
      // shift direction: any unit vector keeps |chart| >= diam proxy on
      // 5B_i; steer it by a dilation-invariant angle of the center so two
      // distinct centers can never produce identical chart values (rational
      // independence of sqrt(2), sqrt(3) rules out exact angle ties)
      const double shift = r + reach;
      const double theta_raw =
          std::sqrt(2.0) * (cx / r) + std::sqrt(3.0) * (cy / (r * r));
      const double theta =
          2.0 * M_PI * (theta_raw - std::floor(theta_raw));
      const double sx = shift * std::cos(theta), sy = shift * std::sin(theta);
      for (std::size_t row = 0; row < patch.points.size(); ++row) {
        const std::size_t p = patch.points[row];
        const double d = space.dist(p, center);
        const double u = std::min(1.0, std::max(0.0, 2.0 - d / r));
        const double v = std::min(1.0, std::max(0.0, 5.0 - d / r));
        if (u == 0.0 && v == 0.0) continue;
        const double c0 = alpha * (sample.coords[p][0] - cx) + sx;
        const double c1 = alpha * (sample.coords[p][1] - cy) / cx + sy;
        auto& val = patch.values[row];
        val[2 * i] = c0 * u;
        val[2 * i + 1] = c1 * u;
        val[2 * budget + 2 * i] = c0 * v;
        val[2 * budget + 2 * i + 1] = c1 * v;
      }
    }
    if (decomp.star_points(q).size() > 1) {
      // balance the whole patch the same way before taking the budget
      const auto& pts = decomp.star_points(q);
      double exp_q = 0.0, con_q = 0.0;
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
          std::size_t ra = SIZE_MAX, rb = SIZE_MAX;
          ra = static_cast<std::size_t>(
              std::lower_bound(patch.points.begin(), patch.points.end(), pts[a]) -
              patch.points.begin());
          rb = static_cast<std::size_t>(
              std::lower_bound(patch.points.begin(), patch.points.end(), pts[b]) -
              patch.points.begin());
          const double d = space.dist(pts[a], pts[b]);
          const double img = euclidean_dist(patch.values[ra], patch.values[rb]);
          if (img > 0.0) {
            exp_q = std::max(exp_q, img / d);
            con_q = std::max(con_q, d / img);
          }
        }
      if (exp_q > 0.0 && con_q > 0.0) {
        const double beta = std::sqrt(con_q / exp_q);
        for (auto& rowv : patch.values)
          for (double& x : rowv) x *= beta;
      }
      const double b = patch_bilip_on_star(space, decomp, atlas, q);
      min_bilip = std::min(min_bilip, b);
      max_bilip = std::max(max_bilip, b);
      any = true;
    }
  }
  atlas.l2 = any ? max_bilip : 1.0;
  if (stats) {
    stats->ball_budget = budget;
    stats->min_bilip = any ? min_bilip : 1.0;
    stats->max_bilip = any ? max_bilip : 1.0;
  }
  return atlas;
}

}  // namespace bilip
