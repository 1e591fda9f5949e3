#include "bilip/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bilip {

namespace {
constexpr double kSlack = 1e-9;
}

const std::vector<double>& LipschitzMap::value_at(std::size_t point) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), point);
  if (it == domain.end() || *it != point)
    throw std::invalid_argument("point not in map domain");
  return values[static_cast<std::size_t>(it - domain.begin())];
}

bool LipschitzMap::covers(std::size_t point) const {
  return std::binary_search(domain.begin(), domain.end(), point);
}

LipschitzMap make_total_map(std::size_t n, std::vector<std::vector<double>> values,
                            double declared_constant) {
  LipschitzMap m;
  m.domain.resize(n);
  std::iota(m.domain.begin(), m.domain.end(), std::size_t{0});
  m.values = std::move(values);
  m.declared_constant = declared_constant;
  return m;
}

double euclidean_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

DistortionReport measure_distortion(const FiniteMetricSpace& space, const LipschitzMap& map) {
  DistortionReport rep;
  const auto& dom = map.domain;
  for (std::size_t a = 0; a < dom.size(); ++a)
    for (std::size_t b = a + 1; b < dom.size(); ++b) {
      const double d = space.dist(dom[a], dom[b]);
      const double img = euclidean_dist(map.values[a], map.values[b]);
      if (img == 0.0) {
        rep.infinite_contraction = true;
        if (rep.collapsed_pairs.size() < 32)
          rep.collapsed_pairs.emplace_back(space.id_of(dom[a]), space.id_of(dom[b]));
        continue;
      }
      const double ex = img / d, co = d / img;
      if (ex > rep.expansion) {
        rep.expansion = ex;
        rep.worst_expansion_pair = {space.id_of(dom[a]), space.id_of(dom[b])};
      }
      if (co > rep.contraction) {
        rep.contraction = co;
        rep.worst_contraction_pair = {space.id_of(dom[a]), space.id_of(dom[b])};
      }
    }
  if (rep.infinite_contraction) {
    rep.contraction = std::numeric_limits<double>::infinity();
    rep.distortion = std::numeric_limits<double>::infinity();
  } else if (rep.expansion > 0.0) {
    rep.distortion = rep.expansion * rep.contraction;
  }
  return rep;
}

LipschitzMap mcshane_extend(const FiniteMetricSpace& space, const LipschitzMap& f, double L) {
  if (f.domain.empty()) throw std::invalid_argument("extension needs a nonempty domain");
  if (!(L >= 0.0)) throw std::invalid_argument("negative Lipschitz constant");
  const std::size_t dim = f.dim();
  for (std::size_t a = 0; a < f.domain.size(); ++a)
    for (std::size_t b = a + 1; b < f.domain.size(); ++b) {
      const double d = space.dist(f.domain[a], f.domain[b]);
      for (std::size_t k = 0; k < dim; ++k)
        if (std::abs(f.values[a][k] - f.values[b][k]) > L * d * (1.0 + kSlack))
          throw std::invalid_argument(
              "map is not " + std::to_string(L) + "-Lipschitz on its domain: coordinate " +
              std::to_string(k) + ", pair (" + std::to_string(space.id_of(f.domain[a])) +
              ", " + std::to_string(space.id_of(f.domain[b])) + ")");
    }

  const std::size_t n = space.size();
  std::vector<std::vector<double>> vals(n, std::vector<double>(dim));
  for (std::size_t p = 0; p < n; ++p) {
    if (f.covers(p)) {
      vals[p] = f.value_at(p);  // exact on the domain
      continue;
    }
    for (std::size_t k = 0; k < dim; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < f.domain.size(); ++a)
        best = std::min(best, f.values[a][k] + L * space.dist(p, f.domain[a]));
      vals[p][k] = best;
    }
  }
  return make_total_map(n, std::move(vals), std::sqrt(static_cast<double>(dim)) * L);
}

LipschitzMap assouad_embed(const FiniteMetricSpace& space, double eps,
                           const AssouadOptions& opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("snowflake exponent in (0,1)");
  const std::size_t n = space.size();
  if (n == 1 || space.diameter() == 0.0)
    return make_total_map(n, std::vector<std::vector<double>>(n), 1.0);

  const double diam = space.diameter();
  const double sep = space.min_separation();
  // diameter-anchored ladder, one extra scale below min separation so the
  // finest net is all of X and the map is injective
  std::vector<double> scales;
  for (double r = diam;; r *= opts.delta) {
    scales.push_back(r);
    if (r < sep) break;
  }

  struct Level {
    double scale;
    std::vector<std::size_t> centers;
    std::vector<int> color;  // per center, 1-based
  };
  std::vector<Level> levels;
  int max_color = 0;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    Level lv;
    lv.scale = scales[j];
    lv.centers = greedy_net(space, lv.scale).centers;
    lv.color.assign(lv.centers.size(), 0);
    // same-color centers must be >= 2r apart; 4r keeps the active centers of
    // any near pair in distinct blocks through the critical scales, which
    // measurably stabilizes the contraction side
    for (std::size_t a = 0; a < lv.centers.size(); ++a) {
      std::vector<char> forbidden(lv.centers.size() + 2, 0);
      for (std::size_t b = 0; b < a; ++b)
        if (space.dist(lv.centers[a], lv.centers[b]) < 4.0 * lv.scale)
          forbidden[lv.color[b]] = 1;
      int c = 1;
      while (forbidden[c]) ++c;
      lv.color[a] = c;
      max_color = std::max(max_color, c);
    }
    levels.push_back(std::move(lv));
  }

  const std::size_t dim = 2 * static_cast<std::size_t>(max_color);
  std::vector<std::vector<double>> vals(n, std::vector<double>(dim, 0.0));
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const Level& lv = levels[j];
    const double w = std::pow(lv.scale, eps);
    const std::size_t parity = j % 2;
    for (std::size_t a = 0; a < lv.centers.size(); ++a) {
      const std::size_t block = parity * max_color + (lv.color[a] - 1);
      for (std::size_t p = 0; p < n; ++p) {
        const double bump = std::max(0.0, 1.0 - space.dist(p, lv.centers[a]) / lv.scale);
        if (bump > 0.0) vals[p][block] += w * bump;
      }
    }
  }
  return make_total_map(n, std::move(vals), 0.0);  // constant measured by callers
}

}  // namespace bilip
