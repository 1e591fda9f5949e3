#include "bilip/glue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bilip {

namespace {

constexpr double kSlack = 1e-9;

std::size_t patch_row(const RawPatch& patch, std::size_t p) {
  auto it = std::lower_bound(patch.points.begin(), patch.points.end(), p);
  if (it == patch.points.end() || *it != p) return SIZE_MAX;
  return static_cast<std::size_t>(it - patch.points.begin());
}

}  // namespace

std::vector<double> PatchAtlas::htilde(const WhitneyDecomposition& decomp, std::size_t q,
                                       std::size_t p) const {
  (void)decomp;
  std::vector<double> out(m2, 0.0);
  const std::size_t row = patch_row(patches[q], p);
  if (row == SIZE_MAX) return out;
  const double f = phi[q][row];
  if (f == 0.0) return out;
  for (std::size_t k = 0; k < m2; ++k) out[k] = (patches[q].values[row][k] + shift[q][k]) * f;
  return out;
}

PatchAtlas atlas_from_coords(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                             const std::vector<std::vector<double>>& coords) {
  PatchAtlas atlas;
  atlas.m2 = coords.empty() ? 0 : coords.front().size();
  atlas.patches.resize(decomp.cube_count());
  double l2 = 1.0;
  for (std::size_t q = 0; q < decomp.cube_count(); ++q) {
    RawPatch& patch = atlas.patches[q];
    patch.points = decomp.star2_points(q);
    patch.values.reserve(patch.points.size());
    for (std::size_t p : patch.points) patch.values.push_back(coords[p]);
    if (decomp.star_points(q).size() > 1)
      l2 = std::max(l2, patch_bilip_on_star(space, decomp, atlas, q));
  }
  atlas.l2 = l2;
  return atlas;
}

double patch_bilip_on_star(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           const PatchAtlas& atlas, std::size_t q) {
  const auto& pts = decomp.star_points(q);
  const RawPatch& patch = atlas.patches[q];
  double worst = 1.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const std::size_t ra = patch_row(patch, pts[a]), rb = patch_row(patch, pts[b]);
      if (ra == SIZE_MAX || rb == SIZE_MAX)
        throw std::invalid_argument("patch " + std::to_string(q) +
                                    " does not cover its Q** point set");
      const double d = space.dist(pts[a], pts[b]);
      const double img = euclidean_dist(patch.values[ra], patch.values[rb]);
      if (img == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::max(img / d, d / img));
    }
  return worst;
}

namespace {

// both annulus sides reduce to u >= r' + sqrt(r'^2 + 1), u = c*L2
double minimal_annulus_c(double rmax_over_diam, double l2) {
  const double r = rmax_over_diam;
  return (r + std::sqrt(r * r + 1.0)) / l2;
}

// deterministic unit vector seeded by the cube's center id (splitmix64)
std::vector<double> translation_direction(PointId id, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  if (dim == 0) return v;
  std::uint64_t state = static_cast<std::uint64_t>(id) + 0x9e3779b97f4a7c15ull;
  auto next = [&state]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return static_cast<double>(z >> 11) * 0x1.0p-53;  // [0,1)
  };
  double norm2 = 0.0;
  for (double& x : v) {
    x = 2.0 * next() - 1.0;
    norm2 += x * x;
  }
  if (norm2 == 0.0) {
    v[0] = 1.0;
    return v;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

struct PatchGeometry {
  std::vector<double> centroid;
  double rmax = 0.0;
};

PatchGeometry star_image_geometry(const WhitneyDecomposition& decomp, const PatchAtlas& atlas,
                                  std::size_t q) {
  const auto& pts = decomp.star_points(q);
  const RawPatch& patch = atlas.patches[q];
  PatchGeometry g;
  g.centroid.assign(atlas.m2, 0.0);
  for (std::size_t p : pts) {
    const std::size_t row = patch_row(patch, p);
    for (std::size_t k = 0; k < atlas.m2; ++k) g.centroid[k] += patch.values[row][k];
  }
  for (double& v : g.centroid) v /= static_cast<double>(pts.size());
  for (std::size_t p : pts) {
    const std::size_t row = patch_row(patch, p);
    g.rmax = std::max(g.rmax, euclidean_dist(patch.values[row], g.centroid));
  }
  return g;
}

void ensure_atlas_storage(const WhitneyDecomposition& decomp, PatchAtlas& atlas) {
  const std::size_t nc = decomp.cube_count();
  if (atlas.patches.size() != nc)
    throw std::invalid_argument("atlas does not supply a patch per cube");
  atlas.shift.resize(nc);
  atlas.phi.resize(nc);
  atlas.measured_bilip.resize(nc, 1.0);
  if (atlas.effective_diam.size() != nc) {
    atlas.effective_diam.assign(nc, 0.0);
    for (std::size_t q = 0; q < nc; ++q) {
      const auto& cube = decomp.cubes[q];
      atlas.effective_diam[q] = cube.diam > 0.0 ? cube.diam : cube.level_scale;
    }
  }
}

}  // namespace

void normalize_patch(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                     const CutoffFamily& cutoffs, PatchAtlas& atlas, std::size_t q, double c) {
  ensure_atlas_storage(decomp, atlas);
  const double l2 = atlas.l2;
  const double measured = patch_bilip_on_star(space, decomp, atlas, q);
  atlas.measured_bilip[q] = measured;
  if (measured > l2 * (1.0 + kSlack)) {
    // locate a witness pair for the rejection
    const auto& pts = decomp.star_points(q);
    const RawPatch& patch = atlas.patches[q];
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const double d = space.dist(pts[a], pts[b]);
        const double img = euclidean_dist(patch.values[patch_row(patch, pts[a])],
                                          patch.values[patch_row(patch, pts[b])]);
        if (img == 0.0 || img > l2 * d * (1.0 + kSlack) || d > l2 * img * (1.0 + kSlack))
          throw std::invalid_argument(
              "patch " + std::to_string(q) + " exceeds the bi-Lipschitz budget " +
              std::to_string(l2) + " on Q*: witness pair (" +
              std::to_string(space.id_of(pts[a])) + ", " + std::to_string(space.id_of(pts[b])) +
              ")");
      }
  }

  const double diam = atlas.effective_diam[q];
  const PatchGeometry geo = star_image_geometry(decomp, atlas, q);
  const double cmin = minimal_annulus_c(geo.rmax / diam, l2);
  if (c < cmin)
    throw std::invalid_argument("annulus infeasible for cube " + std::to_string(q) +
                                " with c = " + std::to_string(c) +
                                "; minimal feasible c = " + std::to_string(cmin));

  const double u = c * l2;
  const double r_mid = 0.5 * (u + 1.0 / u) * diam;
  auto& t = atlas.shift[q];
  t.assign(atlas.m2, 0.0);
  for (std::size_t k = 0; k < atlas.m2; ++k) t[k] = -geo.centroid[k];
  // translation direction: any isometric choice keeps the annulus, but one
  // direction shared by all cubes maps every singleton patch of a given
  // scale onto the same image point, and the glued map then collapses
  // symmetric pairs. Center ids are distinct across cubes, so id-seeded
  // directions spread the images over the sphere of radius r_mid.
  const auto dir = translation_direction(space.id_of(decomp.cubes[q].center), atlas.m2);
  for (std::size_t k = 0; k < atlas.m2; ++k) t[k] += r_mid * dir[k];

  // cutoff values on the patch's point set
  const RawPatch& patch = atlas.patches[q];
  auto& ph = atlas.phi[q];
  ph.assign(patch.points.size(), 0.0);
  for (std::size_t row = 0; row < patch.points.size(); ++row)
    ph[row] = cutoffs.eval(decomp, space, q, patch.points[row]);

  // annulus holds on Q* by construction; check it anyway
  for (std::size_t p : decomp.star_points(q)) {
    const std::size_t row = patch_row(patch, p);
    std::vector<double> v = patch.values[row];
    for (std::size_t k = 0; k < atlas.m2; ++k) v[k] += t[k];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < diam / u * (1.0 - 1e-6) || norm > u * diam * (1.0 + 1e-6))
      throw std::runtime_error("annulus violated after translation on cube " +
                               std::to_string(q));
  }
}

void normalize_atlas(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                     const CutoffFamily& cutoffs, PatchAtlas& atlas, std::optional<double> c) {
  ensure_atlas_storage(decomp, atlas);
  if (atlas.l2 < 1.0) atlas.l2 = 1.0;
  double c_used;
  if (c.has_value()) {
    c_used = *c;
  } else {
    // tightest c every cube can satisfy, with margin; the nominal 2*L2+1
    // assumes star images of radius <= L2*diam(Q), which halo-wide patches
    // exceed, and a larger-than-needed c inflates the translation radius
    // (and with it the Lipschitz constant of H) quadratically in L2
    c_used = 1.0 / atlas.l2;  // u = c*L2 >= 1 keeps the annulus nonempty
    for (std::size_t q = 0; q < decomp.cube_count(); ++q) {
      const PatchGeometry geo = star_image_geometry(decomp, atlas, q);
      c_used = std::max(c_used, minimal_annulus_c(geo.rmax / atlas.effective_diam[q], atlas.l2) *
                                    (1.0 + 1e-6));
    }
  }
  for (std::size_t q = 0; q < decomp.cube_count(); ++q)
    normalize_patch(space, decomp, cutoffs, atlas, q, c_used);
  atlas.annulus_c = c_used;
}

double HField::norm(std::size_t p) const { return std::sqrt(norm2[p]); }

double HField::dist(std::size_t p, std::size_t q) const {
  double dot = 0.0;
  const auto& a = blocks[p];
  const auto& b = blocks[q];
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (a[i].first > b[j].first) {
      ++j;
    } else {
      const auto& va = a[i].second;
      const auto& vb = b[j].second;
      for (std::size_t k = 0; k < va.size(); ++k) dot += va[k] * vb[k];
      ++i;
      ++j;
    }
  }
  const double s = norm2[p] + norm2[q] - 2.0 * dot;
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

std::vector<double> HField::dense_row(std::size_t p) const {
  std::vector<double> row(m_colors * m2, 0.0);
  for (const auto& [color, v] : blocks[p]) {
    const std::size_t base = static_cast<std::size_t>(color - 1) * m2;
    for (std::size_t k = 0; k < m2; ++k) row[base + k] = v[k];
  }
  return row;
}

HField assemble_H(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                  const PatchAtlas& atlas) {
  if (!atlas.normalized()) throw std::invalid_argument("atlas must be normalized first");
  if (decomp.colors.empty()) throw std::invalid_argument("decomposition is not colored");
  // the coloring must be valid at the radius recorded on the decomposition
  for (std::size_t q = 0; q < decomp.cube_count(); ++q)
    for (std::size_t r = q + 1; r < decomp.cube_count(); ++r)
      if (decomp.colors[q] == decomp.colors[r] && decomp.whitney_distance(q, r) < decomp.rho)
        throw std::invalid_argument("coloring invalid at rho for cubes " + std::to_string(q) +
                                    ", " + std::to_string(r));

  HField h;
  h.m_colors = static_cast<std::size_t>(decomp.color_count);
  h.m2 = atlas.m2;
  const std::size_t n = space.size();
  h.blocks.assign(n, {});
  h.norm2.assign(n, 0.0);

  for (std::size_t q = 0; q < decomp.cube_count(); ++q) {
    const int color = decomp.colors[q];
    if (color < 1 || static_cast<std::size_t>(color) > h.m_colors)
      throw std::invalid_argument("color index " + std::to_string(color) + " exceeds M");
    const RawPatch& patch = atlas.patches[q];
    for (std::size_t row = 0; row < patch.points.size(); ++row) {
      const double f = atlas.phi[q][row];
      if (f == 0.0) continue;
      const std::size_t p = patch.points[row];
      auto& pb = h.blocks[p];
      auto it = std::find_if(pb.begin(), pb.end(),
                             [color](const auto& e) { return e.first == color; });
      if (it == pb.end()) {
        pb.emplace_back(color, std::vector<double>(h.m2, 0.0));
        it = pb.end() - 1;
      }
      for (std::size_t k = 0; k < h.m2; ++k)
        it->second[k] += (patch.values[row][k] + atlas.shift[q][k]) * f;
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    auto& pb = h.blocks[p];
    std::sort(pb.begin(), pb.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double s = 0.0;
    for (const auto& [color, v] : pb)
      for (double x : v) s += x * x;
    h.norm2[p] = s;
  }
  return h;
}

std::vector<double> GlobalEmbedding::row(std::size_t p) const {
  std::vector<double> out;
  out.reserve(dim());
  const auto& gv = g.value_at(p);
  out.insert(out.end(), gv.begin(), gv.end());
  const auto hv = h.dense_row(p);
  out.insert(out.end(), hv.begin(), hv.end());
  out.push_back(dist_y[p]);
  return out;
}

double GlobalEmbedding::f_dist(std::size_t p, std::size_t q) const {
  const double dg = euclidean_dist(g.value_at(p), g.value_at(q));
  const double dh = h.dist(p, q);
  const double dy = dist_y[p] - dist_y[q];
  return std::sqrt(dg * dg + dh * dh + dy * dy);
}

GlobalEmbedding assemble_F(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           LipschitzMap g, HField h, double l1, double l2, double rho) {
  GlobalEmbedding f;
  f.m1 = g.dim();
  f.g = std::move(g);
  f.h = std::move(h);
  f.dist_y = decomp.dist_to_y;
  f.l1 = l1;
  f.l2 = l2;
  f.m_colors = decomp.color_count;
  f.rho = rho;

  DistortionReport rep;
  const std::size_t n = space.size();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double d = space.dist(p, q);
      const double img = f.f_dist(p, q);
      if (img == 0.0) {
        rep.infinite_contraction = true;
        if (rep.collapsed_pairs.size() < 32)
          rep.collapsed_pairs.emplace_back(space.id_of(p), space.id_of(q));
        continue;
      }
      const double ex = img / d, co = d / img;
      if (ex > rep.expansion) {
        rep.expansion = ex;
        rep.worst_expansion_pair = {space.id_of(p), space.id_of(q)};
      }
      if (co > rep.contraction) {
        rep.contraction = co;
        rep.worst_contraction_pair = {space.id_of(p), space.id_of(q)};
      }
    }
  if (rep.infinite_contraction) {
    rep.contraction = std::numeric_limits<double>::infinity();
    rep.distortion = std::numeric_limits<double>::infinity();
  } else if (rep.expansion > 0.0) {
    rep.distortion = rep.expansion * rep.contraction;
  }
  f.report = std::move(rep);
  return f;
}

std::int64_t choose_m1(double c1, double perfectness, double delta, double min_dim) {
  const double base = 4.0 * c1 * perfectness / delta + 1.0;
  const double b2 = base * base;
  const double b4 = b2 * b2;
  const double m1 = std::ceil(b4 - 1e-9);
  return static_cast<std::int64_t>(std::max(m1, std::ceil(min_dim)));
}

WLargeReport verify_wlarge_scale(const FiniteMetricSpace& space,
                                 const WhitneyDecomposition& decomp, const LipschitzMap& g,
                                 double m1, double l1,
                                 std::optional<double> rho_override) {
  WLargeReport rep;
  rep.rho = rho_override.value_or(16.0 * std::max(m1, 1.0) * std::max(l1, 1.0) *
                                  std::max(l1, 1.0));
  rep.tau = 0.5 * rep.rho / (1.0 + decomp.comparability_bound);
  const std::size_t nc = decomp.cube_count();
  for (std::size_t cq = 0; cq < nc; ++cq)
    for (std::size_t cr = cq + 1; cr < nc; ++cr) {
      if (decomp.whitney_distance(cq, cr) >= rep.rho) {
        // orient so the second cube carries the larger diameter
        const std::size_t small = decomp.cubes[cq].diam <= decomp.cubes[cr].diam ? cq : cr;
        const std::size_t big = small == cq ? cr : cq;
        const double maxdiam = decomp.cubes[big].diam;
      const double ratio = maxdiam > 0.0
                               ? decomp.cube_dist(small, big) / maxdiam
                               : std::numeric_limits<double>::infinity();
        const bool case1 = ratio >= rep.tau;
        for (std::size_t p : decomp.cubes[small].members)
          for (std::size_t q : decomp.cubes[big].members) {
            const double d = space.dist(p, q);
            if (case1) {
              ++rep.case1_pairs;
              const double lhs = euclidean_dist(g.value_at(p), g.value_at(q));
              const double rhs = d / (4.0 * std::max(l1, 1.0));
              if (lhs < rhs * (1.0 - kSlack) && rep.violations.size() < 32)
                rep.violations.push_back({space.id_of(p), space.id_of(q), 1, lhs, rhs});
            } else {
              if (decomp.cubes[small].diam == 0.0) {
                ++rep.singleton_scope;  // Whitney upper bound vacuous for the small cube
                continue;
              }
              ++rep.case2_pairs;
              const double lhs = std::abs(decomp.dist_to_y[p] - decomp.dist_to_y[q]);
              const double rhs = 0.5 * maxdiam;
              if (lhs < rhs * (1.0 - kSlack) && rep.violations.size() < 32)
                rep.violations.push_back({space.id_of(p), space.id_of(q), 2, lhs, rhs});
            }
          }
      }
    }
  return rep;
}

WLocalReport verify_wlocal(const FiniteMetricSpace& space, const WhitneyDecomposition& decomp,
                           const HField& h, double l2, double annulus_c,
                           std::optional<double> rho_override) {
  WLocalReport rep;
  rep.rho = rho_override.value_or(decomp.rho);
  const std::size_t n = space.size();
  for (std::size_t p = 0; p < n; ++p) {
    if (decomp.point_cube[p] < 0) continue;
    const std::size_t cq = static_cast<std::size_t>(decomp.point_cube[p]);
    for (std::size_t q = 0; q < n; ++q) {
      if (q == p || decomp.point_cube[q] < 0) continue;
      const std::size_t cr = static_cast<std::size_t>(decomp.point_cube[q]);
      if (cq != cr && decomp.whitney_distance(cq, cr) >= rep.rho) continue;
      const double d = space.dist(p, q);
      const double img = h.dist(p, q);
      if (decomp.in_star_points(cq, q)) {
        ++rep.case1_pairs;
        const double rhs = d / l2;
        if (img < rhs * (1.0 - kSlack) && rep.violations.size() < 32)
          rep.violations.push_back({space.id_of(p), space.id_of(q), 1, img, rhs});
      } else if (!decomp.in_star2_points(cq, q)) {
        ++rep.case2_pairs;
        const double rhs = decomp.cubes[cq].diam / (annulus_c * l2);
        if (img < rhs * (1.0 - kSlack) && rep.violations.size() < 32)
          rep.violations.push_back({space.id_of(p), space.id_of(q), 2, img, rhs});
      } else {
        ++rep.case3_pairs;
        const double rhs = d / l2;
        if (img < rhs * (1.0 - kSlack) && rep.violations.size() < 32)
          rep.violations.push_back({space.id_of(p), space.id_of(q), 3, img, rhs});
      }
    }
  }
  return rep;
}

std::size_t max_support_overlap(const WhitneyDecomposition& decomp) {
  std::size_t worst = 0;
  if (decomp.point_cube.empty()) return 0;
  const std::size_t n = decomp.point_cube.size();
  std::vector<std::size_t> count(n, 0);
  for (std::size_t q = 0; q < decomp.cube_count(); ++q)
    for (std::size_t p : decomp.star2_points(q)) ++count[p];
  for (std::size_t c : count) worst = std::max(worst, c);
  return worst;
}

}  // namespace bilip
