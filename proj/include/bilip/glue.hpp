// Local patches normalized into annuli, the color-block sum H, the final
// concatenated embedding F = g x H x dist(.,Y), and the co-Lipschitz case
// verifiers.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bilip/lipschitz.hpp"
#include "bilip/metric_space.hpp"
#include "bilip/whitney.hpp"

namespace bilip {

struct RawPatch {
  std::vector<std::size_t> points;          // Q** point set, sorted full-space indices
  std::vector<std::vector<double>> values;  // parallel, dim m2
};

// One patch per decomposition cube; normalization fills shift/phi and pins
// the annulus constant c.
struct PatchAtlas {
  std::size_t m2 = 0;
  double l2 = 1.0;       // uniform bi-Lipschitz budget on Q*
  double annulus_c = 0.0;  // 0 until normalized
  std::vector<RawPatch> patches;
  std::vector<std::vector<double>> shift;   // t_Q
  std::vector<std::vector<double>> phi;     // cutoff values on patch points
  std::vector<double> measured_bilip;       // per cube on Q*, 1 when vacuous
  std::vector<double> effective_diam;       // diam, or level scale for singletons

  bool normalized() const { return annulus_c > 0.0; }
  // h~_Q(p); zero vector when p is outside Q**.
  std::vector<double> htilde(const WhitneyDecomposition& decomp, std::size_t q,
                             std::size_t p) const;
};

// Identity-style atlas from coordinates (m2 = coordinate dimension); l2 is
// set to the measured maximum over cubes.
PatchAtlas atlas_from_coords(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                             const std::vector<std::vector<double>>& coords);

// Measured bi-Lipschitz constant of one raw patch restricted to Q* pairs.
double patch_bilip_on_star(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           const PatchAtlas& atlas, std::size_t q);

// Translate one patch so the Q* image centroid sits at radius
// ((c*L2 + 1/(c*L2))/2) * diam(Q) on the first axis, then verify the annulus.
// Throws when the patch is not L2-bi-Lipschitz on Q* (witness pair) or when
// the annulus is infeasible for the given c (reports the minimal feasible c).
void normalize_patch(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                     const CutoffFamily& cutoffs, PatchAtlas& atlas, std::size_t q, double c);

// Validates every patch, picks c = max(2*L2+1, per-cube feasibility minima)
// unless one is supplied, and normalizes all cubes.
void normalize_atlas(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                     const CutoffFamily& cutoffs, PatchAtlas& atlas,
                     std::optional<double> c = std::nullopt);

// Colored patch sum; blocks stored sparsely per point.
struct HField {
  std::size_t m_colors = 0, m2 = 0;
  std::vector<std::vector<std::pair<int, std::vector<double>>>> blocks;  // sorted by color
  std::vector<double> norm2;

  double norm(std::size_t p) const;
  double dist(std::size_t p, std::size_t q) const;
  std::vector<double> dense_row(std::size_t p) const;
};

HField assemble_H(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                  const PatchAtlas& atlas);

struct GlobalEmbedding {
  LipschitzMap g;               // McShane extension, m1 coordinates
  HField h;
  std::vector<double> dist_y;   // per point
  std::size_t m1 = 0;
  double l1 = 1.0, l2 = 1.0;
  int m_colors = 0;
  double rho = 0.0;
  DistortionReport report;

  std::size_t dim() const { return m1 + h.m_colors * h.m2 + 1; }
  std::vector<double> row(std::size_t p) const;
  double f_dist(std::size_t p, std::size_t q) const;
};

GlobalEmbedding assemble_F(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           LipschitzMap g, HField h, double l1, double l2, double rho);

// Smallest integer M1 killing the extension error in the far-pair chain:
// M1 >= (4*C1*A/delta + 1)^4, and at least the dimension the Y-embedding needs.
std::int64_t choose_m1(double c1, double perfectness, double delta, double min_dim = 1);

struct CaseViolation {
  PointId p = -1, q = -1;
  int which_case = 0;
  double lhs = 0.0, rhs = 0.0;
};

struct WLargeReport {
  double rho = 0.0, tau = 0.0;
  std::size_t case1_pairs = 0, case2_pairs = 0;
  std::size_t singleton_scope = 0;  // case-2 pairs whose smaller cube is a singleton
  std::vector<CaseViolation> violations;  // capped
};

// Far-pair lower bounds: |g(p)-g(q)| >= d/(4*L1) when the gap dominates the
// diameters, |dist(p,Y)-dist(q,Y)| >= diam(R)/2 otherwise.
WLargeReport verify_wlarge_scale(const FiniteMetricSpace& space,
                                 const WhitneyDecomposition& decomp, const LipschitzMap& g,
                                 double m1, double l1,
                                 std::optional<double> rho_override = std::nullopt);

struct WLocalReport {
  double rho = 0.0;
  std::size_t case1_pairs = 0, case2_pairs = 0, case3_pairs = 0;
  std::vector<CaseViolation> violations;
};

// Near-pair lower bounds through the color blocks: (1/L2)*d within a star,
// diam(Q)/(c*L2) against points outside Q**, (1/L2)*d via a shared
// intermediate star otherwise.
WLocalReport verify_wlocal(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           const HField& h, double l2, double annulus_c,
                           std::optional<double> rho_override = std::nullopt);

// max over points of the number of Q** supports containing it
std::size_t max_support_overlap(const WhitneyDecomposition& decomp);

}  // namespace bilip
