#include "bilip/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace bilip {

namespace {

constexpr double kTriangleSlack = 1e-9;  // relative, float round-off only

std::string pair_str(PointId a, PointId b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::build(
    std::vector<PointId> ids, const std::function<double(std::size_t, std::size_t)>& dist_fn,
    std::vector<double> weights) {
  FiniteMetricSpace s;
  s.ids_ = std::move(ids);
  s.weights_ = std::move(weights);
  const std::size_t n = s.ids_.size();
  if (n == 0) throw std::invalid_argument("metric space needs at least one point");
  if (!s.weights_.empty() && s.weights_.size() != n)
    throw std::invalid_argument("weights size does not match point count");
  s.tri_.resize(n * (n - 1) / 2);
  std::size_t at = 0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s.tri_[at++] = dist_fn(i, j);
  s.finalize();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_full_matrix(std::vector<PointId> ids,
                                                      const std::vector<std::vector<double>>& m,
                                                      std::vector<double> weights) {
  const std::size_t n = ids.size();
  if (m.size() != n) throw std::invalid_argument("distance matrix row count != point count");
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("distance matrix is not square");
    if (m[i][i] != 0.0)
      throw std::invalid_argument("nonzero diagonal at point " + std::to_string(ids[i]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i])
        throw std::invalid_argument("asymmetric distances for pair " +
                                    pair_str(ids[i], ids[j]));
  return build(std::move(ids), [&m](std::size_t i, std::size_t j) { return m[i][j]; },
               std::move(weights));
}

FiniteMetricSpace FiniteMetricSpace::from_lower_triangle(std::vector<PointId> ids,
                                                         std::span<const double> tri,
                                                         std::vector<double> weights) {
  const std::size_t n = ids.size();
  if (tri.size() != n * (n - 1) / 2)
    throw std::invalid_argument("lower triangle has wrong length");
  return build(std::move(ids),
               [&tri](std::size_t i, std::size_t j) { return tri[i * (i - 1) / 2 + j]; },
               std::move(weights));
}

std::size_t FiniteMetricSpace::index_of(PointId id) const {
  auto it = std::lower_bound(id_order_.begin(), id_order_.end(), id,
                             [this](std::size_t a, PointId b) { return ids_[a] < b; });
  if (it == id_order_.end() || ids_[*it] != id)
    throw std::invalid_argument("unknown point id " + std::to_string(id));
  return *it;
}

void FiniteMetricSpace::finalize() {
  const std::size_t n = ids_.size();
  {
    std::set<PointId> seen(ids_.begin(), ids_.end());
    if (seen.size() != n) throw std::invalid_argument("duplicate point ids");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!weights_.empty() && !(weights_[i] > 0.0))
      throw std::invalid_argument("nonpositive weight at point " + std::to_string(ids_[i]));
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double d = dist(i, j);
      if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("nonpositive or nonfinite distance for pair " +
                                    pair_str(ids_[i], ids_[j]));
      diameter_ = std::max(diameter_, d);
      min_sep_ = std::min(min_sep_, d);
    }
  id_order_.resize(n);
  std::iota(id_order_.begin(), id_order_.end(), std::size_t{0});
  std::sort(id_order_.begin(), id_order_.end(),
            [this](std::size_t a, std::size_t b) { return ids_[a] < ids_[b]; });
  validate_triangle();
}

void FiniteMetricSpace::validate_triangle() const {
  const std::size_t n = ids_.size();
  auto check = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double lhs = dist(a, c);
    const double rhs = dist(a, b) + dist(b, c);
    if (lhs > rhs * (1.0 + kTriangleSlack))
      throw std::invalid_argument("triangle inequality violated by (" +
                                  std::to_string(ids_[a]) + ", " + std::to_string(ids_[b]) +
                                  ", " + std::to_string(ids_[c]) + ")");
  };
  if (n <= 200) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = a + 1; c < n; ++c) {
          if (b == a || b == c) continue;
          check(a, b, c);
        }
  } else {
    std::mt19937_64 rng(0x5eedu);  // fixed seed: reproducible sampling
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int t = 0; t < 200000; ++t) {
      std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
      if (a == b || b == c || a == c) continue;
      check(a, b, c);
    }
  }
}

Subspace restrict_to(const FiniteMetricSpace& parent, std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<PointId> ids(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) ids[i] = parent.id_of(keep[i]);
  std::vector<double> w;
  if (parent.has_weights()) {
    w.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) w[i] = parent.weight(keep[i]);
  }
  auto space = FiniteMetricSpace::build(
      std::move(ids),
      [&parent, &keep](std::size_t i, std::size_t j) { return parent.dist(keep[i], keep[j]); },
      std::move(w));
  return Subspace{std::move(space), std::move(keep)};
}

std::vector<std::size_t> greedy_net_centers(const FiniteMetricSpace& space, double scale,
                                            std::span<const std::size_t> candidates) {
  if (!(scale > 0.0)) throw std::invalid_argument("net scale must be positive");
  std::vector<std::size_t> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end(),
            [&space](std::size_t a, std::size_t b) { return space.id_of(a) < space.id_of(b); });
  std::vector<std::size_t> centers;
  for (std::size_t p : order) {
    bool ok = true;
    for (std::size_t c : centers)
      if (space.dist(p, c) < scale) {
        ok = false;
        break;
      }
    if (ok) centers.push_back(p);
  }
  return centers;
}

Net greedy_net(const FiniteMetricSpace& space, double scale) {
  Net net;
  net.scale = scale;
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  net.centers = greedy_net_centers(space, scale, all);
  net.assignment.resize(space.size());
  for (std::size_t p = 0; p < space.size(); ++p) {
    std::size_t best = net.centers.front();
    double best_d = space.dist(p, best);
    for (std::size_t c : net.centers) {
      const double d = space.dist(p, c);
      if (d < best_d || (d == best_d && space.id_of(c) < space.id_of(best))) {
        best = c;
        best_d = d;
      }
    }
    net.assignment[p] = best;
  }
  return net;
}

double estimate_doubling(const FiniteMetricSpace& space, std::span<const double> radii) {
  if (radii.empty()) throw std::invalid_argument("empty radii sample");
  const std::size_t n = space.size();
  double worst = 1.0;
  std::vector<std::pair<double, double>> row(n);  // (distance, weight), sorted
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) row[y] = {space.dist(x, y), space.weight(y)};
    std::sort(row.begin(), row.end());
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + row[k].second;
    auto ball_mass = [&](double r) {
      auto it = std::upper_bound(row.begin(), row.end(), r,
                                 [](double v, const std::pair<double, double>& e) {
                                   return v < e.first;
                                 });
      return prefix[static_cast<std::size_t>(it - row.begin())];
    };
    for (double r : radii) {
      if (!(r > 0.0)) continue;
      const double inner = ball_mass(r);
      if (inner <= 0.0) continue;
      worst = std::max(worst, ball_mass(2.0 * r) / inner);
    }
  }
  return worst;
}

double estimate_uniform_perfectness(const FiniteMetricSpace& space,
                                    std::span<const double> radii) {
  const std::size_t n = space.size();
  if (n < 2) return 1.0;
  const double diam = space.diameter();
  double worst = 1.0;
  std::vector<double> ds;
  ds.reserve(n - 1);
  for (std::size_t x = 0; x < n; ++x) {
    ds.clear();
    for (std::size_t y = 0; y < n; ++y)
      if (y != x) ds.push_back(space.dist(x, y));
    std::sort(ds.begin(), ds.end());
    const double nearest = ds.front();
    for (double r : radii) {
      if (r >= diam || r < nearest) continue;
      // largest realized distance <= r
      auto it = std::upper_bound(ds.begin(), ds.end(), r);
      const double s = *(it - 1);
      worst = std::max(worst, r / s);
    }
  }
  return worst;
}

std::vector<double> default_radii(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  std::vector<double> radii;
  if (n < 2) return radii;
  if (n <= 500) {
    radii.reserve(n * (n - 1) / 2);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) radii.push_back(space.dist(i, j));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  } else {
    const double lo = space.min_separation(), hi = space.diameter();
    for (double r = lo; r <= hi; r *= std::sqrt(2.0)) radii.push_back(r);
    radii.push_back(hi);
  }
  return radii;
}

SpaceDiagnostics diagnose(const FiniteMetricSpace& space) {
  SpaceDiagnostics d;
  d.diameter = space.diameter();
  d.min_separation = space.min_separation();
  auto radii = default_radii(space);
  if (!radii.empty()) {
    d.doubling_estimate = estimate_doubling(space, radii);
    d.perfectness_estimate = estimate_uniform_perfectness(space, radii);
  }
  return d;
}

}  // namespace bilip
