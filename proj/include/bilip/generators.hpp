// Instance generators shared by the CLI and the test harness.
#pragma once

#include <cstdint>
#include <vector>

#include "bilip/metric_space.hpp"

namespace bilip {

// Space with attached coordinates (Euclidean metric unless stated otherwise).
struct CoordSpace {
  FiniteMetricSpace space;
  std::vector<std::vector<double>> coords;  // per point, any fixed dimension
};

// rows x cols grid with the given spacing, ids 0..n-1 row-major.
CoordSpace grid_space(int rows, int cols, double spacing = 1.0);

// Points on the real line at the given positions, ids 0..n-1 in input order.
CoordSpace line_space(std::vector<double> xs);

// {first * ratio^i : i = 0..count-1}, optionally together with 0.
CoordSpace geometric_line(int count, double ratio, bool include_zero, double first = 1.0);

// n uniform points in [0, side]^dim, fixed seed.
CoordSpace random_cloud(int n, std::uint64_t seed, int dim = 2, double side = 1.0);

// Snowflake of a space: same points, metric d^eps (a metric for 0 < eps <= 1).
FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double eps);

// n sorted uniform samples of [0,1] with metric |t-s|^eps.
CoordSpace snowflaked_line_samples(int n, double eps, std::uint64_t seed);

}  // namespace bilip
