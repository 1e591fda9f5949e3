#include "bilip/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace bilip {

namespace {

CoordSpace from_coords(std::vector<std::vector<double>> coords) {
  std::vector<PointId> ids(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) ids[i] = static_cast<PointId>(i);
  auto dist = [&coords](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < coords[i].size(); ++k) {
      const double d = coords[i][k] - coords[j][k];
      s += d * d;
    }
    return std::sqrt(s);
  };
  CoordSpace out;
  out.space = FiniteMetricSpace::build(std::move(ids), dist);
  out.coords = std::move(coords);
  return out;
}

}  // namespace

CoordSpace grid_space(int rows, int cols, double spacing) {
  std::vector<std::vector<double>> coords;
  coords.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      coords.push_back({c * spacing, r * spacing});
  return from_coords(std::move(coords));
}

CoordSpace line_space(std::vector<double> xs) {
  std::vector<std::vector<double>> coords;
  coords.reserve(xs.size());
  for (double x : xs) coords.push_back({x});
  return from_coords(std::move(coords));
}

CoordSpace geometric_line(int count, double ratio, bool include_zero, double first) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must be in (0,1)");
  std::vector<double> xs;
  if (include_zero) xs.push_back(0.0);
  double v = first;
  for (int i = 0; i < count; ++i) {
    xs.push_back(v);
    v *= ratio;
  }
  return line_space(std::move(xs));
}

CoordSpace random_cloud(int n, std::uint64_t seed, int dim, double side) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<std::vector<double>> coords(n, std::vector<double>(dim));
  for (auto& c : coords)
    for (double& v : c) v = u(rng);
  return from_coords(std::move(coords));
}

FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("snowflake exponent in (0,1]");
  return FiniteMetricSpace::build(
      space.ids(),
      [&space, eps](std::size_t i, std::size_t j) { return std::pow(space.dist(i, j), eps); });
}

CoordSpace snowflaked_line_samples(int n, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> ts(n);
  for (double& t : ts) t = u(rng);
  std::sort(ts.begin(), ts.end());
  std::vector<PointId> ids(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ids[i] = static_cast<PointId>(i);
  CoordSpace out;
  out.space = FiniteMetricSpace::build(std::move(ids), [&ts, eps](std::size_t i, std::size_t j) {
    return std::pow(std::abs(ts[i] - ts[j]), eps);
  });
  for (double t : ts) out.coords.push_back({t});
  return out;
}

}  // namespace bilip
