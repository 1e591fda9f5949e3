// The flagship instance: Carnot-Caratheodory distance on the plane with
// frame {d/dx, x d/dy}, approximated by shortest paths on an anisotropic
// grid, plus the analytic distance bounds, dilations, the dyadic boundary
// mesh, and chart-based local patches.
#pragma once

#include <cstdint>
#include <vector>

#include "bilip/glue.hpp"
#include "bilip/metric_space.hpp"
#include "bilip/whitney.hpp"

namespace bilip {

struct GrushinPoint {
  double x = 0.0, y = 0.0;
};

struct GrushinWindow {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
};

// Analytic bracket for the cc distance:
//   lower = (|dx| + |dy| / sqrt(min(|x1|,|x2|)^2 + 4|dy|)) / 2
//   upper = 4 (|dx| + sqrt(|dy|))
struct CcBounds {
  double lower = 0.0, upper = 0.0;
};
CcBounds cc_bounds(GrushinPoint p, GrushinPoint q);

// Exactly |x|: the horizontal segment realizes it and no shorter horizontal
// curve exists.
double dist_to_axis(GrushinPoint p);

GrushinPoint dilate(GrushinPoint p, double lambda);

// 8-neighbor lattice anchored at the axis: x nodes at (k+1/2)*hx so no node
// touches x = 0 and dilations map grids onto grids exactly. Edge weight
// sqrt(dx^2 + dy^2/xm^2) with xm = (|xa|+|xb|)/2 >= hx/2.
class GrushinGrid {
 public:
  GrushinGrid(GrushinWindow window, int nx, int ny);

  const GrushinWindow& window() const { return window_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  std::size_t node_count() const { return xs_.size() * ys_.size(); }
  std::size_t x_count() const { return xs_.size(); }
  std::size_t y_count() const { return ys_.size(); }
  GrushinPoint node(std::size_t v) const {
    return {xs_[v / ys_.size()], ys_[v % ys_.size()]};
  }
  std::size_t snap(GrushinPoint p) const;

  std::vector<double> distances_from(std::size_t source) const;
  double distance_nodes(std::size_t a, std::size_t b) const;
  double distance(GrushinPoint a, GrushinPoint b) const;

  struct BracketCheck {
    double value = 0.0, lower = 0.0, upper = 0.0;
    bool within = true;
  };
  BracketCheck distance_checked(GrushinPoint a, GrushinPoint b, double tol = 0.1) const;

 private:
  GrushinWindow window_;
  double hx_ = 0.0, hy_ = 0.0;
  std::vector<double> xs_, ys_;
};

// Cubes of size 2^-j x 2^-2j tiling the off-axis strips |x| in
// [2^-j, 2^-j+1]; dist/diam evaluated from the analytic bounds.
struct GrushinMeshCube {
  int level = 0;  // j
  long ix = 0, iy = 0;
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  double dist_cc = 0.0;      // exact |x| at the inner edge
  double diam_lower = 0.0;   // max(width, corner-pair analytic lower bounds)
  double diam_upper = 0.0;   // 4 (sx + sqrt(sy))
};

std::vector<GrushinMeshCube> build_grushin_mesh(int j_min, int j_max, GrushinWindow window);

// Finite sample: one space point per (strided) grid node, distances from the
// all-pairs shortest-path oracle. The axis band is the innermost node column
// on each side.
struct GrushinSample {
  GrushinGrid grid;
  FiniteMetricSpace space;
  std::vector<std::vector<double>> coords;  // (x, y) per point
  std::vector<std::size_t> axis_band;       // Y, dense indices
  std::vector<std::size_t> node_of;         // point -> grid node
};

GrushinSample build_grushin_sample(GrushinWindow window, int nx, int ny, int stride = 1);

// Boundary distance for the axis band from the exact identity dist(p, A) =
// |x|: zero on the band, max(|x| - band_x, hx/2) off it. 1-Lipschitz for
// the cc oracle and free of the lattice ties that the min-over-Y distance
// produces on mirror-symmetric samples.
std::vector<double> axis_band_distances(const GrushinSample& sample);

// Chart patches: cover Q** by cc-balls of radius diam(Q) (greedy net),
// per ball a rescaled identity chart shifted off the origin, tent bumps
// 1 on B_i / 0 off 2B_i and 1 on 4B_i / 0 off 5B_i, output dimension 4N.
struct ChartAtlasOptions {
  std::size_t ball_budget = 0;  // 0 = derive from the data
};
struct ChartAtlasStats {
  std::size_t ball_budget = 0;          // N
  double min_bilip = 1.0, max_bilip = 1.0;  // measured per-cube constants on Q*
};
PatchAtlas atlas_from_grushin_charts(const GrushinSample& sample,
                                     const WhitneyDecomposition& decomp,
                                     ChartAtlasStats* stats = nullptr,
                                     const ChartAtlasOptions& opts = {});

}  // namespace bilip
