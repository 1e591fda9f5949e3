#include "bilip/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bilip {

namespace {

constexpr double kSlack = 1e-9;

LipschitzMap kuratowski_embedding(const FiniteMetricSpace& space,
                                  const std::vector<std::size_t>& y) {
  LipschitzMap f;
  f.domain = y;
  std::sort(f.domain.begin(), f.domain.end());
  f.values.reserve(f.domain.size());
  for (std::size_t p : f.domain) {
    std::vector<double> row(f.domain.size());
    for (std::size_t j = 0; j < f.domain.size(); ++j) row[j] = space.dist(p, f.domain[j]);
    f.values.push_back(std::move(row));
  }
  f.declared_constant = std::sqrt(static_cast<double>(f.domain.size()));
  return f;
}

double measured_bilip_on_domain(const FiniteMetricSpace& space, const LipschitzMap& f) {
  double worst = 1.0;
  for (std::size_t a = 0; a < f.domain.size(); ++a)
    for (std::size_t b = a + 1; b < f.domain.size(); ++b) {
      const double d = space.dist(f.domain[a], f.domain[b]);
      const double img = euclidean_dist(f.values[a], f.values[b]);
      if (img == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::max(img / d, d / img));
    }
  return worst;
}

double max_coordinate_slope(const FiniteMetricSpace& space, const LipschitzMap& f) {
  double worst = 0.0;
  for (std::size_t a = 0; a < f.domain.size(); ++a)
    for (std::size_t b = a + 1; b < f.domain.size(); ++b) {
      const double d = space.dist(f.domain[a], f.domain[b]);
      for (std::size_t k = 0; k < f.dim(); ++k)
        worst = std::max(worst, std::abs(f.values[a][k] - f.values[b][k]) / d);
    }
  return worst;
}

}  // namespace

LipschitzMap derive_y_embedding(const PipelineInput& in, double* l1_out) {
  LipschitzMap f;
  if (in.grushin && !in.coords.empty()) {
    // axis band is comparable to a snowflaked line in the plane coordinates
    auto ysub = restrict_to(in.space, in.y);
    std::vector<PointId> ids = ysub.space.ids();
    auto euclid = FiniteMetricSpace::build(
        ids, [&](std::size_t a, std::size_t b) {
          const auto& ca = in.coords[ysub.to_parent[a]];
          const auto& cb = in.coords[ysub.to_parent[b]];
          return euclidean_dist(ca, cb);
        });
    LipschitzMap local = assouad_embed(euclid, 0.5);
    f.domain = ysub.to_parent;
    f.values = local.values;
  } else {
    f = kuratowski_embedding(in.space, in.y);
  }
  if (f.domain.size() == 1 && f.dim() == 0) {
    // keep one coordinate so g is well-formed
    f.values = {{0.0}};
  }
  const double l1 = f.domain.size() > 1 ? measured_bilip_on_domain(in.space, f) : 1.0;
  f.declared_constant = l1;
  if (l1_out) *l1_out = l1;
  return f;
}

PipelineRun run_pipeline(PipelineInput in, PipelineOptions opts,
                         std::optional<PatchAtlas> user_atlas) {
  PipelineRun run;
  std::sort(in.y.begin(), in.y.end());
  if (in.y.empty()) throw std::invalid_argument("Y must be nonempty");

  const std::size_t n = in.space.size();
  std::vector<std::size_t> omega_idx;
  for (std::size_t p = 0; p < n; ++p)
    if (!std::binary_search(in.y.begin(), in.y.end(), p)) omega_idx.push_back(p);

  run.f = derive_y_embedding(in, &run.l1);

  if (omega_idx.empty()) {
    // embedding degenerates to f padded with two zero coordinates
    run.omega_empty = true;
    run.in = std::move(in);
    run.opts = opts;
    run.mcshane_l = std::max(max_coordinate_slope(run.in.space, run.f), run.l1);
    run.g = mcshane_extend(run.in.space, run.f, run.mcshane_l);
    run.h.m_colors = 0;
    run.h.m2 = 0;
    run.h.blocks.assign(n, {});
    run.h.norm2.assign(n, 0.0);
    run.embedding.g = run.g;
    run.embedding.h = run.h;
    run.embedding.dist_y.assign(n, 0.0);
    run.embedding.m1 = run.g.dim();
    run.embedding.l1 = run.l1;
    run.embedding.report = measure_distortion(run.in.space, run.g);
    return run;
  }

  run.omega = restrict_to(in.space, omega_idx);

  auto range = opts.levels.value_or(default_level_range(run.omega.space, opts.delta));
  WhitneyParams wp;
  wp.epsilon = opts.epsilon;
  wp.relevel_violations = opts.relevel;
  // the axis identity dist(p, A) = |x| replaces the min-over-samples
  // distance when Y is exactly the sample's axis band
  if (in.grushin && in.y == in.grushin->axis_band)
    wp.boundary_distance = axis_band_distances(*in.grushin);
  for (int attempt = 0;; ++attempt) {
    run.tree = build_cube_tree(run.omega.space, opts.delta, range.first, range.second);
    try {
      run.decomp = whitney_decompose(run.tree, run.omega, in.space, in.y, wp);
      break;
    } catch (const LayerRangeError& e) {
      if (attempt > 0 || opts.levels.has_value()) throw;
      range = {std::min(range.first, e.k_lo), std::max(range.second, e.k_hi)};
    }
  }

  run.m1_required = choose_m1(run.decomp.c1, run.decomp.perfectness, opts.delta,
                           static_cast<double>(run.f.dim()));
  run.rho_used = opts.rho.value_or(16.0 * std::max<double>(run.f.dim(), 1.0) *
                                   std::max(run.l1, 1.0) * std::max(run.l1, 1.0));
  color_cubes(run.decomp, run.rho_used);
  run.cutoffs = build_cutoffs(run.decomp, in.space);

  // per-coordinate extension constant L1 (the coordinatewise slope never
  // exceeds it; a singleton Y measures slope 0, which would flatten g)
  run.mcshane_l = std::max(max_coordinate_slope(in.space, run.f), run.l1);
  run.g = mcshane_extend(in.space, run.f, run.mcshane_l);

  if (user_atlas.has_value()) {
    run.atlas = std::move(*user_atlas);
  } else if (in.grushin && opts.patches == "auto") {
    run.atlas = atlas_from_grushin_charts(*in.grushin, run.decomp, &run.chart_stats);
  } else if (!in.coords.empty()) {
    run.atlas = atlas_from_coords(in.space, run.decomp, in.coords);
  } else {
    throw std::invalid_argument("no patch atlas: non-coordinate inputs need --patches");
  }
  normalize_atlas(in.space, run.decomp, run.cutoffs, run.atlas, opts.annulus_c);

  run.h = assemble_H(in.space, run.decomp, run.atlas);
  run.embedding = assemble_F(in.space, run.decomp, run.g, run.h, run.l1, run.atlas.l2,
                             run.rho_used);
  run.in = std::move(in);
  run.opts = opts;
  return run;
}

namespace {

void check_tree_axioms(const PipelineRun& run, std::vector<CheckResult>& out) {
  const CubeTree& tree = run.tree;
  const FiniteMetricSpace& sp = run.omega.space;
  CheckResult part{"tree-partition-per-level", true, true, 0, 0, ""};
  CheckResult nest{"tree-nesting", true, true, 0, 0, ""};
  CheckResult fam{"tree-parent-child", true, true, 0, 0, ""};
  const std::size_t n = sp.size();
  for (int k = tree.k_min; k <= tree.k_max; ++k) {
    std::size_t covered = 0;
    for (std::int64_t c : tree.level(k)) covered += tree.cubes[c].members.size();
    part.scope += n;
    if (covered != n) {
      part.passed = false;
      ++part.violations;
      part.detail = "level " + std::to_string(k) + " covers " + std::to_string(covered) +
                    " of " + std::to_string(n);
    }
  }
  for (int k = tree.k_min; k < tree.k_max; ++k)
    for (int l = k + 1; l <= tree.k_max; ++l)
      for (std::size_t p = 0; p < n; ++p) {
        ++nest.scope;
        std::int64_t anc = tree.cube_at(l, p);
        while (anc >= 0 && tree.cubes[anc].level != k) anc = tree.cubes[anc].parent;
        if (anc != tree.cube_at(k, p)) {
          nest.passed = false;
          ++nest.violations;
          if (nest.detail.empty())
            nest.detail = "point id " + std::to_string(sp.id_of(p)) + " levels (" +
                          std::to_string(k) + "," + std::to_string(l) + ")";
        }
      }
  for (const Cube& c : tree.cubes) {
    ++fam.scope;
    const bool parent_ok = c.level == tree.k_min ? c.parent < 0 : c.parent >= 0;
    const bool child_ok = c.level == tree.k_max ? c.children.empty() : !c.children.empty();
    const bool member_ok =
        !c.members.empty() &&
        std::binary_search(c.members.begin(), c.members.end(), c.center);
    if (!(parent_ok && child_ok && member_ok)) {
      fam.passed = false;
      ++fam.violations;
      if (fam.detail.empty())
        fam.detail = "cube level " + std::to_string(c.level) + " index " +
                     std::to_string(c.index);
    }
  }
  out.push_back(part);
  out.push_back(nest);
  out.push_back(fam);
}

void check_decomposition(const PipelineRun& run, std::vector<CheckResult>& out) {
  const auto& d = run.decomp;
  const auto& sp = run.in.space;

  CheckResult cover{"whitney-cover-disjoint", true, true, 0, 0, ""};
  std::vector<int> seen(sp.size(), 0);
  for (const auto& c : d.cubes)
    for (std::size_t p : c.members) ++seen[p];
  for (std::size_t p = 0; p < sp.size(); ++p) {
    ++cover.scope;
    const bool in_y = std::binary_search(d.boundary.begin(), d.boundary.end(), p);
    if ((in_y && seen[p] != 0) || (!in_y && seen[p] != 1)) {
      cover.passed = false;
      ++cover.violations;
      if (cover.detail.empty())
        cover.detail = "point id " + std::to_string(sp.id_of(p)) + " in " +
                       std::to_string(seen[p]) + " cubes";
    }
  }
  out.push_back(cover);

  CheckResult stored{"whitney-cached-geometry", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    ++stored.scope;
    double diam = 0.0;
    for (std::size_t a = 0; a < d.cubes[q].members.size(); ++a)
      for (std::size_t b = a + 1; b < d.cubes[q].members.size(); ++b)
        diam = std::max(diam, sp.dist(d.cubes[q].members[a], d.cubes[q].members[b]));
    double dy = std::numeric_limits<double>::infinity();
    for (std::size_t p : d.cubes[q].members) dy = std::min(dy, d.dist_to_y[p]);
    if (std::abs(diam - d.cubes[q].diam) > kSlack * std::max(1.0, diam) ||
        std::abs(dy - d.cubes[q].dist_to_y) > kSlack * std::max(1.0, dy)) {
      stored.passed = false;
      ++stored.violations;
      if (stored.detail.empty())
        stored.detail = "cube " + std::to_string(q) + " stored diam/dist " +
                        std::to_string(d.cubes[q].diam) + "/" +
                        std::to_string(d.cubes[q].dist_to_y) + " recomputed " +
                        std::to_string(diam) + "/" + std::to_string(dy);
    }
  }
  out.push_back(stored);

  CheckResult whit{"whitney-inequality", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    if (d.cubes[q].members.size() < 2) continue;
    ++whit.scope;
    const bool ok = d.cubes[q].diam <= d.cubes[q].dist_to_y * (1.0 + kSlack) &&
                    d.cubes[q].dist_to_y <=
                        d.comparability_bound * d.cubes[q].diam * (1.0 + kSlack);
    if (!ok) {
      whit.passed = false;
      ++whit.violations;
      if (whit.detail.empty())
        whit.detail = "cube " + std::to_string(q) + " diam " +
                      std::to_string(d.cubes[q].diam) + " dist " +
                      std::to_string(d.cubes[q].dist_to_y) + " bound " +
                      std::to_string(d.comparability_bound);
    }
  }
  whit.detail += whit.detail.empty() ? "bound 4*C1*A/delta = " + std::to_string(d.comparability_bound)
                                     : "";
  out.push_back(whit);

  CheckResult star{"star-symmetry", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q)
    for (std::size_t r : d.star[q]) {
      ++star.scope;
      if (!std::binary_search(d.star[r].begin(), d.star[r].end(), q)) {
        star.passed = false;
        ++star.violations;
        if (star.detail.empty())
          star.detail = "cubes " + std::to_string(q) + ", " + std::to_string(r);
      }
    }
  out.push_back(star);

  CheckResult overlap{"bounded-overlap", false, true, 0, 0, ""};
  overlap.scope = run.in.space.size();
  overlap.detail = "max points per Q** support N = " + std::to_string(max_support_overlap(d));
  out.push_back(overlap);
}

void check_cutoffs(const PipelineRun& run, std::vector<CheckResult>& out) {
  const auto& d = run.decomp;
  const auto& sp = run.in.space;
  CheckResult c{"cutoff-bounds", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    const auto& patchpts = run.atlas.patches.empty() ? d.star2_points(q)
                                                     : run.atlas.patches[q].points;
    for (std::size_t row = 0; row < patchpts.size(); ++row) {
      const double v = run.cutoffs.eval(d, sp, q, patchpts[row]);
      ++c.scope;
      const bool in_star = d.in_star_points(q, patchpts[row]);
      if (v < 0.0 || v > 1.0 || (in_star && v != 1.0)) {
        c.passed = false;
        ++c.violations;
        if (c.detail.empty())
          c.detail = "cube " + std::to_string(q) + " point id " +
                     std::to_string(sp.id_of(patchpts[row]));
      }
    }
  }
  // off-support zero + Lipschitz bound; pairs with both values zero pass
  // trivially, so the scan only needs pairs touching the support
  CheckResult lip{"cutoff-lipschitz", true, true, 0, 0, ""};
  double worst_c = std::numeric_limits<double>::infinity();
  std::vector<double> phi(sp.size());
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    const auto& support = d.star2_points(q);
    std::fill(phi.begin(), phi.end(), 0.0);
    for (std::size_t a : support) phi[a] = run.cutoffs.eval(d, sp, q, a);
    if (!std::isfinite(run.cutoffs.gap[q])) continue;
    const double gap = run.cutoffs.gap[q];
    for (std::size_t a : support)
      for (std::size_t b = 0; b < sp.size(); ++b) {
        if (a == b) continue;
        ++lip.scope;
        if (std::abs(phi[a] - phi[b]) > sp.dist(a, b) / gap * (1.0 + kSlack)) {
          lip.passed = false;
          ++lip.violations;
          if (lip.detail.empty())
            lip.detail = "cube " + std::to_string(q) + " pair (" +
                         std::to_string(sp.id_of(a)) + ", " + std::to_string(sp.id_of(b)) + ")";
        }
      }
    if (d.cubes[q].diam > 0.0) worst_c = std::min(worst_c, gap / d.cubes[q].diam);
  }
  if (lip.detail.empty()) lip.detail = "min gap/diam = " + std::to_string(worst_c);
  out.push_back(c);
  out.push_back(lip);
}

void check_coloring(const PipelineRun& run, std::vector<CheckResult>& out) {
  const auto& d = run.decomp;
  CheckResult c{"coloring-validity", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q)
    for (std::size_t r = q + 1; r < d.cube_count(); ++r) {
      ++c.scope;
      if (d.colors[q] == d.colors[r] && d.whitney_distance(q, r) < d.rho) {
        c.passed = false;
        ++c.violations;
        if (c.detail.empty())
          c.detail = "cubes " + std::to_string(q) + ", " + std::to_string(r) + " share color " +
                     std::to_string(d.colors[q]);
      }
    }
  const std::size_t m = d.max_ball_cardinality;
  CheckResult count{"coloring-count", true, true, 1, 0, ""};
  count.detail = "M = " + std::to_string(d.color_count) + ", m = " + std::to_string(m) +
                 ", budget m(m-1)+1 = " + std::to_string(m * (m - 1) + 1);
  if (static_cast<std::size_t>(d.color_count) > m * (m - 1) + 1) {
    count.passed = false;
    count.violations = 1;
  }
  out.push_back(c);
  out.push_back(count);
}

void check_patches(const PipelineRun& run, std::vector<CheckResult>& out) {
  const auto& d = run.decomp;
  const auto& sp = run.in.space;
  CheckResult bl{"patch-bilipschitz", true, true, 0, 0, ""};
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    if (d.star_points(q).size() < 2) continue;
    ++bl.scope;
    const double b = patch_bilip_on_star(sp, d, run.atlas, q);
    if (b > run.atlas.l2 * (1.0 + kSlack)) {
      bl.passed = false;
      ++bl.violations;
      if (bl.detail.empty())
        bl.detail = "cube " + std::to_string(q) + " measured " + std::to_string(b) +
                    " > L2 = " + std::to_string(run.atlas.l2);
    }
  }
  out.push_back(bl);

  CheckResult ann{"patch-annulus", true, true, 0, 0, ""};
  const double u = run.atlas.annulus_c * run.atlas.l2;
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    const double diam = run.atlas.effective_diam[q];
    for (std::size_t p : d.star_points(q)) {
      ++ann.scope;
      auto v = run.atlas.htilde(d, q, p);
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < diam / u * (1.0 - 1e-6) || norm > u * diam * (1.0 + 1e-6)) {
        ann.passed = false;
        ++ann.violations;
        if (ann.detail.empty())
          ann.detail = "cube " + std::to_string(q) + " point id " +
                       std::to_string(sp.id_of(p)) + " |h~| = " + std::to_string(norm);
      }
    }
  }
  out.push_back(ann);

  if (run.in.grushin) {
    CheckResult uni{"chart-uniformity", false, true, 0, 0, ""};
    uni.scope = d.cube_count();
    uni.detail = "measured bi-Lipschitz spread [" + std::to_string(run.chart_stats.min_bilip) +
                 ", " + std::to_string(run.chart_stats.max_bilip) + "]";
    if (run.chart_stats.max_bilip > 1.1 * run.chart_stats.min_bilip) {
      uni.passed = false;
      uni.violations = 1;
    }
    out.push_back(uni);
  }
}

void check_embedding(const PipelineRun& run, std::vector<CheckResult>& out) {
  const auto& sp = run.in.space;
  const auto& d = run.decomp;

  CheckResult ybranch{"f-on-y-exact", true, true, 0, 0, ""};
  for (std::size_t i = 0; i < run.f.domain.size(); ++i) {
    const std::size_t p = run.f.domain[i];
    ++ybranch.scope;
    const bool g_ok = run.g.value_at(p) == run.f.values[i];
    const bool h_ok = run.h.norm2.empty() || run.h.norm2[p] == 0.0;
    const bool y_ok = run.embedding.dist_y.empty() || run.embedding.dist_y[p] == 0.0;
    if (!(g_ok && h_ok && y_ok)) {
      ybranch.passed = false;
      ++ybranch.violations;
      if (ybranch.detail.empty())
        ybranch.detail = "point id " + std::to_string(sp.id_of(p));
    }
  }
  out.push_back(ybranch);

  if (run.omega_empty) return;

  CheckResult cross{"h-cross-bound", false, true, 0, 0, ""};
  const double nl2 = static_cast<double>(max_support_overlap(d)) * run.atlas.annulus_c *
                     run.atlas.l2;
  double worst = 0.0;
  for (std::size_t p = 0; p < sp.size(); ++p) {
    if (d.point_cube[p] < 0) continue;
    for (std::size_t y : d.boundary) {
      ++cross.scope;
      worst = std::max(worst, run.h.norm(p) / sp.dist(p, y));
    }
  }
  cross.detail = "max |H(p)|/d(p,y) = " + std::to_string(worst) + ", N*c*L2 = " +
                 std::to_string(nl2);
  if (worst > nl2 * (1.0 + kSlack)) {
    cross.passed = false;
    cross.violations = 1;
  }
  out.push_back(cross);

  CheckResult wl{"w-large-cases", false, true, 0, 0, ""};
  auto wrep = verify_wlarge_scale(sp, d, run.g, static_cast<double>(run.f.dim()), run.l1,
                                  run.rho_used);
  wl.scope = wrep.case1_pairs + wrep.case2_pairs;
  wl.violations = wrep.violations.size();
  wl.passed = wrep.violations.empty();
  wl.detail = "case1 " + std::to_string(wrep.case1_pairs) + ", case2 " +
              std::to_string(wrep.case2_pairs) + ", singleton-scope " +
              std::to_string(wrep.singleton_scope);
  if (!wrep.violations.empty())
    wl.detail += "; first witness (" + std::to_string(wrep.violations[0].p) + ", " +
                 std::to_string(wrep.violations[0].q) + ")";
  out.push_back(wl);

  CheckResult wloc{"w-local-cases", false, true, 0, 0, ""};
  auto lrep = verify_wlocal(sp, d, run.h, run.atlas.l2, run.atlas.annulus_c, run.rho_used);
  wloc.scope = lrep.case1_pairs + lrep.case2_pairs + lrep.case3_pairs;
  wloc.violations = lrep.violations.size();
  wloc.passed = lrep.violations.empty();
  wloc.detail = "cases " + std::to_string(lrep.case1_pairs) + "/" +
                std::to_string(lrep.case2_pairs) + "/" + std::to_string(lrep.case3_pairs);
  if (!lrep.violations.empty())
    wloc.detail += "; first witness (" + std::to_string(lrep.violations[0].p) + ", " +
                   std::to_string(lrep.violations[0].q) + ")";
  out.push_back(wloc);

  CheckResult dist{"no-infinite-contraction", true, true, 1, 0, ""};
  dist.detail = "expansion " + std::to_string(run.embedding.report.expansion) +
                ", contraction " + std::to_string(run.embedding.report.contraction);
  if (run.embedding.report.infinite_contraction) {
    dist.passed = false;
    dist.violations = run.embedding.report.collapsed_pairs.size();
    dist.detail = "collapsed pair (" +
                  std::to_string(run.embedding.report.collapsed_pairs[0].first) + ", " +
                  std::to_string(run.embedding.report.collapsed_pairs[0].second) + ")";
  }
  out.push_back(dist);
}

void check_grushin_bracket(const PipelineRun& run, std::vector<CheckResult>& out) {
  if (!run.in.grushin) return;
  const auto& sample = *run.in.grushin;
  CheckResult br{"grushin-bracketing", false, true, 0, 0, ""};
  std::mt19937_64 rng(20240u);
  std::uniform_int_distribution<std::size_t> pick(0, sample.space.size() - 1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    ++br.scope;
    GrushinPoint pa{sample.coords[a][0], sample.coords[a][1]};
    GrushinPoint pb{sample.coords[b][0], sample.coords[b][1]};
    const auto bounds = cc_bounds(pa, pb);
    const double val = sample.space.dist(a, b);
    if (val < bounds.lower * 0.9 || val > bounds.upper * 1.1) {
      br.passed = false;
      ++br.violations;
      if (br.detail.empty())
        br.detail = "pair ids (" + std::to_string(sample.space.id_of(a)) + ", " +
                    std::to_string(sample.space.id_of(b)) + ")";
    }
  }
  out.push_back(br);
}

}  // namespace

std::vector<CheckResult> run_verification(const PipelineRun& run) {
  std::vector<CheckResult> out;
  if (run.omega_empty) {
    CheckResult deg{"omega-empty", false, true, 0, 0, "Y = X; embedding is f padded"};
    out.push_back(deg);
    check_embedding(run, out);
    return out;
  }
  check_tree_axioms(run, out);
  check_decomposition(run, out);
  check_cutoffs(run, out);
  check_coloring(run, out);
  check_patches(run, out);
  check_embedding(run, out);
  check_grushin_bracket(run, out);
  return out;
}

bool all_hard_passed(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (c.hard && !c.passed) return false;
  return true;
}

}  // namespace bilip
