#include "bilip/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bilip {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

PipelineInput load_space_json(const json& j) {
  PipelineInput in;
  const std::string metric = j.value("metric", "euclidean");

  if (metric == "grushin") {
    const auto& g = j.at("grushin");
    const auto w = g.at("window");
    GrushinWindow window{w.at(0), w.at(1), w.at(2), w.at(3)};
    const int nx = g.at("nx");
    const int ny = g.value("ny", nx);
    const int stride = g.value("stride", 1);
    auto sample = std::make_shared<GrushinSample>(
        build_grushin_sample(window, nx, ny, stride));
    in.space = sample->space;
    in.coords = sample->coords;
    in.grushin = sample;
    return in;
  }

  std::vector<PointId> ids;
  for (const auto& v : j.at("points")) ids.push_back(v.get<PointId>());
  std::vector<double> weights;
  if (j.contains("weights"))
    for (const auto& v : j.at("weights")) weights.push_back(v.get<double>());

  if (j.contains("coords"))
    for (const auto& row : j.at("coords"))
      in.coords.push_back(row.get<std::vector<double>>());

  if (metric == "matrix") {
    std::vector<double> tri;
    for (const auto& v : j.at("matrix")) tri.push_back(v.get<double>());
    in.space = FiniteMetricSpace::from_lower_triangle(std::move(ids), tri, std::move(weights));
  } else if (metric == "euclidean") {
    if (in.coords.size() != ids.size())
      throw std::runtime_error("euclidean metric needs coords for every point");
    const auto& coords = in.coords;
    in.space = FiniteMetricSpace::build(
        std::move(ids),
        [&coords](std::size_t a, std::size_t b) { return euclidean_dist(coords[a], coords[b]); },
        std::move(weights));
  } else {
    throw std::runtime_error("unknown metric kind '" + metric + "'");
  }
  return in;
}

PipelineInput load_space_file(const std::string& path) {
  return load_space_json(read_json_file(path));
}

json space_to_json(const FiniteMetricSpace& space,
                   const std::vector<std::vector<double>>& coords) {
  json j;
  j["metric"] = "matrix";
  j["points"] = space.ids();
  std::vector<double> tri;
  tri.reserve(space.size() * (space.size() - 1) / 2);
  for (std::size_t i = 1; i < space.size(); ++i)
    for (std::size_t k = 0; k < i; ++k) tri.push_back(space.dist(i, k));
  j["matrix"] = tri;
  if (!coords.empty()) j["coords"] = coords;
  if (space.has_weights()) {
    std::vector<double> w(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) w[i] = space.weight(i);
    j["weights"] = w;
  }
  return j;
}

std::vector<std::size_t> resolve_y(const PipelineInput& in, const std::string& selector) {
  std::vector<std::size_t> y;
  if (selector == "axis") {
    if (!in.grushin) throw std::runtime_error("'axis' Y selector needs a grushin input");
    y = in.grushin->axis_band;
  } else if (selector.rfind("ids:", 0) == 0) {
    std::stringstream ss(selector.substr(4));
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) y.push_back(in.space.index_of(std::stoll(tok)));
  } else {
    const json j = read_json_file(selector);
    const json& arr = j.is_array() ? j : j.at("y");
    for (const auto& v : arr) y.push_back(in.space.index_of(v.get<PointId>()));
  }
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  return y;
}

json diagnostics_to_json(const SpaceDiagnostics& d, std::size_t n) {
  json j;
  j["points"] = n;
  j["doubling_estimate"] = d.doubling_estimate;
  j["uniform_perfectness_estimate"] =
      std::isfinite(d.perfectness_estimate) ? json(d.perfectness_estimate) : json("inf");
  j["diameter"] = d.diameter;
  j["min_separation"] =
      std::isfinite(d.min_separation) ? json(d.min_separation) : json("inf");
  if (n < 2) j["note"] = "degenerate space: fewer than two points";
  return j;
}

json tree_to_json(const CubeTree& tree, const FiniteMetricSpace& space) {
  json j;
  j["delta"] = tree.delta;
  j["k_min"] = tree.k_min;
  j["k_max"] = tree.k_max;
  j["a0_measured"] = tree.a0_measured;
  j["c1_measured"] = tree.c1_measured;
  json levels = json::array();
  for (int k = tree.k_min; k <= tree.k_max; ++k) {
    json lv;
    lv["k"] = k;
    lv["scale"] = tree.scale_of(k);
    json cubes = json::array();
    for (std::int64_t id : tree.level(k)) {
      const Cube& c = tree.cubes[id];
      json cj;
      cj["id"] = id;
      cj["center"] = space.id_of(c.center);
      json members = json::array();
      for (std::size_t p : c.members) members.push_back(space.id_of(p));
      cj["members"] = members;
      if (c.parent >= 0) cj["parent"] = c.parent;
      cj["children"] = c.children;
      cubes.push_back(cj);
    }
    lv["cubes"] = cubes;
    levels.push_back(lv);
  }
  j["levels"] = levels;
  return j;
}

json decomposition_to_json(const WhitneyDecomposition& d, const FiniteMetricSpace& space) {
  json j;
  j["c_prime"] = d.c_prime;
  j["comparability_bound"] = d.comparability_bound;
  j["c1"] = d.c1;
  j["a0"] = d.a0;
  j["perfectness"] = d.perfectness;
  j["delta"] = d.delta;
  j["epsilon"] = d.epsilon;
  j["rho"] = d.rho;
  j["color_count"] = d.color_count;
  json y = json::array();
  for (std::size_t p : d.boundary) y.push_back(space.id_of(p));
  j["y"] = y;
  j["dist_to_y"] = d.dist_to_y;  // may differ from min-over-Y (exact identities)
  json cubes = json::array();
  for (std::size_t q = 0; q < d.cube_count(); ++q) {
    const auto& c = d.cubes[q];
    json cj;
    cj["index"] = q;
    cj["level"] = c.level;
    cj["level_scale"] = c.level_scale;
    cj["center"] = space.id_of(c.center);
    json members = json::array();
    for (std::size_t p : c.members) members.push_back(space.id_of(p));
    cj["members"] = members;
    cj["diam"] = c.diam;
    cj["dist_to_y"] = c.dist_to_y;
    cj["whitney_violation"] = c.violates_whitney;
    cj["star"] = d.star[q];
    cj["star2"] = d.star2[q];
    if (!d.colors.empty()) cj["color"] = d.colors[q];
    cubes.push_back(cj);
  }
  j["cubes"] = cubes;
  return j;
}

WhitneyDecomposition decomposition_from_json(const json& j, const FiniteMetricSpace& space) {
  WhitneyDecomposition d;
  d.c_prime = j.at("c_prime");
  d.comparability_bound = j.at("comparability_bound");
  d.c1 = j.at("c1");
  d.a0 = j.at("a0");
  d.perfectness = j.at("perfectness");
  d.delta = j.at("delta");
  d.epsilon = j.at("epsilon");
  d.rho = j.value("rho", 0.0);
  d.color_count = j.value("color_count", 0);
  for (const auto& v : j.at("y")) d.boundary.push_back(space.index_of(v.get<PointId>()));
  std::sort(d.boundary.begin(), d.boundary.end());

  d.point_cube.assign(space.size(), -1);
  bool all_colored = true;
  for (const auto& cj : j.at("cubes")) {
    WhitneyCube c;
    c.level = cj.at("level");
    c.level_scale = cj.at("level_scale");
    c.center = space.index_of(cj.at("center").get<PointId>());
    for (const auto& v : cj.at("members"))
      c.members.push_back(space.index_of(v.get<PointId>()));
    std::sort(c.members.begin(), c.members.end());
    c.diam = cj.at("diam");
    c.dist_to_y = cj.at("dist_to_y");
    c.violates_whitney = cj.value("whitney_violation", false);
    d.colors.push_back(cj.value("color", 0));
    if (d.colors.back() <= 0) all_colored = false;
    for (std::size_t p : c.members)
      d.point_cube[p] = static_cast<std::int64_t>(d.cubes.size());
    d.cubes.push_back(std::move(c));
  }
  if (!all_colored) d.colors.clear();  // partially colored dumps count as uncolored

  // per-point boundary distances travel with the dump (they may come from
  // an exact identity rather than min-over-Y); stars and masks rebuild from
  // the member sets
  if (j.contains("dist_to_y")) {
    d.dist_to_y = j.at("dist_to_y").get<std::vector<double>>();
  } else {
    d.dist_to_y.assign(space.size(), 0.0);
    for (std::size_t p = 0; p < space.size(); ++p) {
      if (std::binary_search(d.boundary.begin(), d.boundary.end(), p)) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y : d.boundary) best = std::min(best, space.dist(p, y));
      d.dist_to_y[p] = best;
    }
  }
  d.rebuild_geometry_caches(space);
  return d;
}

json atlas_to_json(const PatchAtlas& atlas, const FiniteMetricSpace& space) {
  json j;
  j["m2"] = atlas.m2;
  j["l2"] = atlas.l2;
  if (atlas.normalized()) j["annulus_c"] = atlas.annulus_c;
  json patches = json::array();
  for (std::size_t q = 0; q < atlas.patches.size(); ++q) {
    json pj;
    pj["cube"] = q;
    json pts = json::array();
    for (std::size_t p : atlas.patches[q].points) pts.push_back(space.id_of(p));
    pj["points"] = pts;
    pj["values"] = atlas.patches[q].values;
    patches.push_back(pj);
  }
  j["patches"] = patches;
  return j;
}

PatchAtlas atlas_from_json(const json& j, const FiniteMetricSpace& space) {
  PatchAtlas atlas;
  atlas.m2 = j.at("m2");
  atlas.l2 = j.at("l2");
  atlas.patches.resize(j.at("patches").size());
  for (const auto& pj : j.at("patches")) {
    const std::size_t q = pj.at("cube");
    if (q >= atlas.patches.size()) throw std::runtime_error("atlas cube index out of range");
    RawPatch& patch = atlas.patches[q];
    std::vector<std::pair<std::size_t, std::vector<double>>> rows;
    const auto& pts = pj.at("points");
    const auto& vals = pj.at("values");
    for (std::size_t r = 0; r < pts.size(); ++r)
      rows.emplace_back(space.index_of(pts[r].get<PointId>()),
                        vals[r].get<std::vector<double>>());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [p, v] : rows) {
      patch.points.push_back(p);
      patch.values.push_back(std::move(v));
    }
  }
  return atlas;
}

json mesh_to_json(const std::vector<GrushinMeshCube>& mesh) {
  json arr = json::array();
  for (const auto& c : mesh) {
    json cj;
    cj["level"] = c.level;
    cj["ix"] = c.ix;
    cj["iy"] = c.iy;
    cj["rect"] = {c.x0, c.x1, c.y0, c.y1};
    cj["dist_cc"] = c.dist_cc;
    cj["diam_lower"] = c.diam_lower;
    cj["diam_upper"] = c.diam_upper;
    arr.push_back(cj);
  }
  json j;
  j["cubes"] = arr;
  return j;
}

json distortion_to_json(const DistortionReport& r) {
  json j;
  j["expansion"] = r.expansion;
  j["contraction"] = std::isfinite(r.contraction) ? json(r.contraction) : json("inf");
  j["distortion"] = std::isfinite(r.distortion) ? json(r.distortion) : json("inf");
  j["worst_expansion_pair"] = {r.worst_expansion_pair.first, r.worst_expansion_pair.second};
  j["worst_contraction_pair"] = {r.worst_contraction_pair.first,
                                 r.worst_contraction_pair.second};
  j["infinite_contraction"] = r.infinite_contraction;
  if (!r.collapsed_pairs.empty()) {
    json arr = json::array();
    for (const auto& [a, b] : r.collapsed_pairs) arr.push_back({a, b});
    j["collapsed_pairs"] = arr;
  }
  return j;
}

namespace {

json violations_json(const std::vector<CaseViolation>& violations) {
  json arr = json::array();
  for (const auto& v : violations) {
    json vj;
    vj["p"] = v.p;
    vj["q"] = v.q;
    vj["case"] = v.which_case;
    vj["lhs"] = v.lhs;
    vj["rhs"] = v.rhs;
    arr.push_back(vj);
  }
  return arr;
}

}  // namespace

json wlarge_to_json(const WLargeReport& r) {
  json j;
  j["rho"] = r.rho;
  j["tau"] = r.tau;
  j["case1_pairs"] = r.case1_pairs;
  j["case2_pairs"] = r.case2_pairs;
  j["singleton_scope"] = r.singleton_scope;
  j["violations"] = violations_json(r.violations);
  return j;
}

json wlocal_to_json(const WLocalReport& r) {
  json j;
  j["rho"] = r.rho;
  j["case1_pairs"] = r.case1_pairs;
  j["case2_pairs"] = r.case2_pairs;
  j["case3_pairs"] = r.case3_pairs;
  j["violations"] = violations_json(r.violations);
  return j;
}

json embedding_report_json(const PipelineRun& run) {
  json j;
  j["n"] = run.in.space.size();
  j["m1"] = run.f.dim();
  j["l1"] = run.l1;
  j["mcshane_l"] = run.mcshane_l;
  j["l2"] = run.atlas.l2;
  j["annulus_c"] = run.atlas.annulus_c;
  j["m_colors"] = run.omega_empty ? 0 : run.decomp.color_count;
  j["m2"] = run.atlas.m2;
  j["rho"] = run.rho_used;
  j["m1_required"] = run.m1_required;
  j["omega_empty"] = run.omega_empty;
  j["dimension"] = run.embedding.dim();
  if (!run.omega_empty) {
    j["cube_count"] = run.decomp.cube_count();
    j["max_support_overlap"] = max_support_overlap(run.decomp);
    j["chart_ball_budget"] = run.chart_stats.ball_budget;
  }
  j["distortion"] = distortion_to_json(run.embedding.report);
  return j;
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["severity"] = c.hard ? "hard" : "warn";
    cj["passed"] = c.passed;
    cj["scope"] = c.scope;
    cj["violations"] = c.violations;
    cj["detail"] = c.detail;
    arr.push_back(cj);
  }
  return arr;
}

void write_embedding_csv(const PipelineRun& run, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::size_t m1 = run.embedding.m1;
  const std::size_t hdim = run.embedding.h.m_colors * run.embedding.h.m2;
  out << "id";
  for (std::size_t k = 0; k < m1; ++k) out << ",g" << k;
  for (std::size_t k = 0; k < hdim; ++k) out << ",h" << k;
  out << ",dist_y\n";
  for (std::size_t p = 0; p < run.in.space.size(); ++p) {
    out << run.in.space.id_of(p);
    const auto& gv = run.g.value_at(p);
    for (double v : gv) out << ',' << fmt17(v);
    const auto hv = run.embedding.h.dense_row(p);
    for (double v : hv) out << ',' << fmt17(v);
    out << ',' << fmt17(run.omega_empty ? 0.0 : run.embedding.dist_y[p]) << "\n";
  }
}

}  // namespace bilip
