// McShane extension, the multiscale snowflake embedder, and the distortion
// measurement harness.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bilip/metric_space.hpp"

namespace bilip {

// Vector-valued map on a subset of a space's points.
struct LipschitzMap {
  std::vector<std::size_t> domain;           // dense indices, sorted ascending
  std::vector<std::vector<double>> values;   // parallel to domain, fixed dim
  double declared_constant = 1.0;

  std::size_t dim() const { return values.empty() ? 0 : values.front().size(); }
  const std::vector<double>& value_at(std::size_t point) const;
  bool covers(std::size_t point) const;
};

LipschitzMap make_total_map(std::size_t n, std::vector<std::vector<double>> values,
                            double declared_constant);

double euclidean_dist(const std::vector<double>& a, const std::vector<double>& b);

struct DistortionReport {
  double expansion = 0.0;     // max |f(p)-f(q)| / d(p,q)
  double contraction = 0.0;   // max d(p,q) / |f(p)-f(q)|; +inf on a collapsed pair
  double distortion = 1.0;    // expansion * contraction (>= 1; 1 when vacuous)
  std::pair<PointId, PointId> worst_expansion_pair{-1, -1};
  std::pair<PointId, PointId> worst_contraction_pair{-1, -1};
  bool infinite_contraction = false;
  std::vector<std::pair<PointId, PointId>> collapsed_pairs;  // capped witnesses
};

// Exact max ratios over all pairs of the map's domain.
DistortionReport measure_distortion(const FiniteMetricSpace& space, const LipschitzMap& map);

// Coordinatewise inf-convolution extension of f (given on a subset A) to the
// whole space. f must be L-Lipschitz per coordinate on A; the extension
// agrees with f on A exactly and carries declared constant sqrt(dim)*L.
LipschitzMap mcshane_extend(const FiniteMetricSpace& space, const LipschitzMap& f, double L);

// Multiscale tent-bump embedding of the snowflake (X, d^eps): one coordinate
// block per (scale parity, net color); validity is measured, not certified.
struct AssouadOptions {
  double delta = 0.5;  // scale ladder ratio
};
LipschitzMap assouad_embed(const FiniteMetricSpace& space, double eps,
                           const AssouadOptions& opts = {});

}  // namespace bilip
