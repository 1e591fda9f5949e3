// Acceptance suite: one criterion per section, one pass/fail line each.
// Exit code = number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bilip/generators.hpp"
#include "bilip/io.hpp"
#include "bilip/pipeline.hpp"

using namespace bilip;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s  (%.1fs)\n", pass ? "PASS" : "FAIL", id, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

PipelineInput line_input(std::vector<double> xs, std::vector<PointId> y_ids) {
  auto l = line_space(std::move(xs));
  PipelineInput in;
  in.space = l.space;
  in.coords = l.coords;
  for (PointId id : y_ids) in.y.push_back(in.space.index_of(id));
  return in;
}

PipelineInput grushin_input(int nx, int stride) {
  auto sample = std::make_shared<GrushinSample>(
      build_grushin_sample({-1, 1, -1, 1}, nx, nx, stride));
  PipelineInput in;
  in.space = sample->space;
  in.coords = sample->coords;
  in.y = sample->axis_band;
  in.grushin = sample;
  return in;
}

std::vector<double> geometric_line_positions() {
  std::vector<double> xs{0.0};
  for (int i = 0; i < 256; ++i) xs.push_back(std::pow(2.0, -i / 8.0));
  return xs;  // 257 points, Y = {0}
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
  Timer t;
  std::size_t violations = 0, checked_trees = 0;
  std::string witness;

  auto verify_tree = [&](const CubeTree& tree, const FiniteMetricSpace& sp) {
    ++checked_trees;
    const std::size_t n = sp.size();
    for (int k = tree.k_min; k <= tree.k_max; ++k) {
      std::size_t covered = 0;
      for (std::int64_t id : tree.level(k)) {
        const Cube& c = tree.cubes[id];
        covered += c.members.size();
        if (c.members.empty() ||
            !std::binary_search(c.members.begin(), c.members.end(), c.center))
          ++violations;
      }
      if (covered != n) ++violations;
      std::vector<char> seen(n, 0);
      for (std::int64_t id : tree.level(k))
        for (std::size_t p : tree.cubes[id].members) {
          if (seen[p]) ++violations;
          seen[p] = 1;
        }
    }
    for (int k = tree.k_min; k < tree.k_max; ++k)
      for (int l = k + 1; l <= tree.k_max; ++l)
        for (std::size_t p = 0; p < n; ++p) {
          std::int64_t anc = tree.cube_at(l, p);
          while (anc >= 0 && tree.cubes[anc].level != k) anc = tree.cubes[anc].parent;
          if (anc != tree.cube_at(k, p)) ++violations;
        }
    for (const Cube& c : tree.cubes) {
      const bool parent_ok = c.level == tree.k_min ? c.parent < 0 : c.parent >= 0;
      const bool child_ok = c.level == tree.k_max ? c.children.empty() : !c.children.empty();
      if (!parent_ok || !child_ok) ++violations;
    }
  };

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> nd(60, 500);
  for (int i = 0; i < 20; ++i) {
    auto cloud = random_cloud(nd(rng), 100 + i);
    auto [k0, k1] = default_level_range(cloud.space, 0.5);
    verify_tree(build_cube_tree(cloud.space, 0.5, k0, k1), cloud.space);
  }
  {
    auto g = grid_space(16, 16, 1.0 / 15.0);
    auto [k0, k1] = default_level_range(g.space, 0.5);
    verify_tree(build_cube_tree(g.space, 0.5, k0, k1), g.space);
  }
  const double secs = t.seconds();
  std::ostringstream d;
  d << "cube axioms on " << checked_trees << " instances, " << violations
    << " violations, runtime " << secs << "s (< 10s)";
  report(1, violations == 0 && secs < 10.0, d.str(), secs);
}

// ------------------------------------------------------- criteria 2, 3, 7 share runs
struct NamedRun {
  std::string name;
  PipelineRun run;
};

void criterion_2(const std::vector<NamedRun*>& runs) {
  Timer t;
  std::size_t scope = 0, violations = 0;
  std::ostringstream d;
  for (auto* nr : runs) {
    const auto& dec = nr->run.decomp;
    std::size_t local = 0;
    for (const auto& c : dec.cubes) {
      if (c.members.size() < 2) continue;
      ++scope;
      const bool ok = c.diam <= c.dist_to_y * (1 + 1e-9) &&
                      c.dist_to_y <= dec.comparability_bound * c.diam * (1 + 1e-9);
      if (!ok) ++local;
    }
    violations += local;
    d << nr->name << " bound=" << dec.comparability_bound << " viol=" << local << "; ";
  }
  d << scope << " non-singleton cubes total";
  report(2, violations == 0 && scope > 0, d.str(), t.seconds());
}

void criterion_3(const std::vector<NamedRun*>& runs) {
  Timer t;
  bool ok = true;
  std::ostringstream d;
  for (auto* nr : runs) {
    const auto& dec = nr->run.decomp;
    std::size_t conflicts = 0;
    for (std::size_t q = 0; q < dec.cube_count(); ++q)
      for (std::size_t r = q + 1; r < dec.cube_count(); ++r)
        if (dec.colors[q] == dec.colors[r] && dec.whitney_distance(q, r) < dec.rho)
          ++conflicts;
    const std::size_t m = dec.max_ball_cardinality;
    const bool budget =
        static_cast<std::size_t>(dec.color_count) <= m * (m - 1) + 1;
    if (conflicts != 0 || !budget) ok = false;
    d << nr->name << " M=" << dec.color_count << " m=" << m << " conflicts=" << conflicts
      << "; ";
  }
  report(3, ok, d.str(), t.seconds());
}

void criterion_4() {
  Timer t;
  std::mt19937_64 rng(2024);
  std::size_t exact_failures = 0, constant_failures = 0;
  for (int i = 0; i < 50; ++i) {
    std::uniform_int_distribution<int> nd(20, 300);
    const int n = nd(rng);
    auto cloud = random_cloud(n, 5000 + i);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<std::size_t> ad(1, std::max<std::size_t>(1, n / 2));
    std::set<std::size_t> aset;
    const std::size_t asize = ad(rng);
    while (aset.size() < asize) aset.insert(pick(rng));
    std::uniform_real_distribution<double> ld(0.5, 4.0);
    std::uniform_int_distribution<std::size_t> md(1, 4);
    const double L = ld(rng);
    const std::size_t dim = md(rng);

    LipschitzMap f;
    f.domain.assign(aset.begin(), aset.end());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    f.values.assign(f.domain.size(), std::vector<double>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t z1 = pick(rng), z2 = pick(rng);
      const double alpha = unit(rng);
      for (std::size_t a = 0; a < f.domain.size(); ++a)
        f.values[a][k] = L * (alpha * cloud.space.dist(f.domain[a], z1) -
                              (1.0 - alpha) * cloud.space.dist(f.domain[a], z2));
    }
    auto F = mcshane_extend(cloud.space, f, L);
    for (std::size_t a = 0; a < f.domain.size(); ++a)
      if (F.value_at(f.domain[a]) != f.values[a]) ++exact_failures;
    const double budget = std::sqrt(static_cast<double>(dim)) * L * (1.0 + 1e-9);
    for (std::size_t p = 0; p < cloud.space.size(); ++p)
      for (std::size_t q = p + 1; q < cloud.space.size(); ++q)
        if (euclidean_dist(F.value_at(p), F.value_at(q)) > budget * cloud.space.dist(p, q))
          ++constant_failures;
  }
  std::ostringstream d;
  d << "50 instances: exact-on-A failures " << exact_failures << ", sqrt(M1)*L failures "
    << constant_failures;
  report(4, exact_failures == 0 && constant_failures == 0, d.str(), t.seconds());
}

void criterion_5() {
  Timer t;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::pair<GrushinPoint, GrushinPoint>> pairs;
  while (pairs.size() < 200) {
    GrushinPoint p{u(rng), u(rng)}, q{u(rng), u(rng)};
    pairs.push_back({p, q});
  }
  auto violations = [&pairs](int nx) {
    GrushinGrid grid({-2, 2, -2, 2}, nx, nx);
    int bad = 0;
    for (const auto& [p, q] : pairs) {
      const double val = grid.distance(p, q);
      const auto b = cc_bounds(p, q);
      if (val < b.lower * 0.9 || val > b.upper * 1.1) ++bad;
    }
    return bad;
  };
  const int v100 = violations(100);
  const int v50 = violations(50);
  const int v200 = violations(200);
  const double secs = t.seconds();
  std::ostringstream d;
  d << "bracket violations at nx=100: " << v100 << "/200; refinement " << v50 << " -> "
    << v200 << "; runtime " << secs << "s (< 60s)";
  report(5, v100 == 0 && v200 <= v50 && secs < 60.0, d.str(), secs);
}

void criterion_6() {
  Timer t;
  GrushinGrid base({-2, 2, -2, 2}, 100, 100);
  GrushinGrid doubled({-4, 4, -8, 8}, 100, 100);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-1.9, 1.9);
  std::size_t ratio_failures = 0;
  for (int i = 0; i < 50; ++i) {
    GrushinPoint p{u(rng), u(rng)}, q{u(rng), u(rng)};
    const double d1 = base.distance(p, q);
    if (d1 == 0.0) continue;
    const double ratio = doubled.distance(dilate(p, 2.0), dilate(q, 2.0)) / d1;
    if (ratio < 1.8 || ratio > 2.2) ++ratio_failures;
  }
  double lo = 1e300, hi = 0.0;
  int axis_pairs = 0;
  std::uniform_real_distribution<double> uy(-1.9, 1.9);
  while (axis_pairs < 100) {
    const double y1 = uy(rng), y2 = uy(rng);
    if (std::abs(y1 - y2) < 1e-3) continue;
    ++axis_pairs;
    const double ratio =
        base.distance({0.0, y1}, {0.0, y2}) / std::sqrt(std::abs(y1 - y2));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const bool bracket_ok = lo >= 0.25 && hi <= 4.0;
  std::ostringstream d;
  d << "dilation ratio failures " << ratio_failures << "/50; axis snowflake ratios ["
    << lo << ", " << hi << "] within [0.25, 4]";
  report(6, ratio_failures == 0 && bracket_ok, d.str(), t.seconds());
}

void criterion_7(NamedRun& base, const fs::path& tmpdir) {
  Timer t;
  const auto& r1 = base.run.embedding.report;
  // CSV emission is part of the command contract
  const fs::path csv = tmpdir / "grushin_embedding.csv";
  write_embedding_csv(base.run, csv.string());
  const bool csv_ok = fs::exists(csv) && fs::file_size(csv) > 0;
  fs::remove(csv);

  auto fine = run_pipeline(grushin_input(120, 2), base.run.opts);
  const auto& r2 = fine.embedding.report;
  const double drift = std::abs(r2.distortion - r1.distortion) / r1.distortion;
  const double secs = t.seconds();
  std::ostringstream d;
  d << "n=" << base.run.in.space.size() << " distortion " << r1.distortion
    << " (double resolution: " << r2.distortion << ", drift " << drift * 100.0
    << "% < 25%); runtime " << secs << "s (< 300s)";
  const bool ok = !r1.infinite_contraction && std::isfinite(r1.distortion) &&
                  !r2.infinite_contraction && drift < 0.25 && csv_ok && secs < 300.0;
  report(7, ok, d.str(), secs);
}

void criterion_8() {
  Timer t;
  bool ok = true;
  std::ostringstream d;

  {  // case 1: two far clusters on the half line
    auto run = run_pipeline(line_input({0, 1, 1.02, 1.04, 9, 9.3, 9.6}, {0}), {});
    auto rep = verify_wlarge_scale(run.in.space, run.decomp, run.g,
                                   static_cast<double>(run.f.dim()), run.l1);
    auto loc = verify_wlocal(run.in.space, run.decomp, run.h, run.atlas.l2,
                             run.atlas.annulus_c, run.rho_used);
    if (rep.case1_pairs == 0 || !rep.violations.empty() || !loc.violations.empty()) ok = false;
    d << "case1 scope " << rep.case1_pairs << " viol " << rep.violations.size() << "; ";
  }
  {  // case 2: deep geometric line at the paper's M1
    std::vector<double> xs{0.0};
    for (int i = 0; i < 480; ++i) xs.push_back(std::pow(2.0, -0.125 * i));
    auto probe = run_pipeline(line_input(xs, {0}), {});
    PipelineOptions opts;
    opts.rho = 16.0 * static_cast<double>(probe.m1_required);
    auto run = run_pipeline(probe.in, opts);
    auto rep = verify_wlarge_scale(run.in.space, run.decomp, run.g,
                                   static_cast<double>(run.m1_required), 1.0);
    auto loc = verify_wlocal(run.in.space, run.decomp, run.h, run.atlas.l2,
                             run.atlas.annulus_c, run.rho_used);
    if (rep.case2_pairs == 0 || !rep.violations.empty()) ok = false;
    if (loc.case1_pairs == 0 || loc.case2_pairs == 0 || !loc.violations.empty()) ok = false;
    d << "case2 scope " << rep.case2_pairs << " viol " << rep.violations.size()
      << "; w-local cases " << loc.case1_pairs << "/" << loc.case2_pairs << "/"
      << loc.case3_pairs << " viol " << loc.violations.size() << "; ";
  }
  {  // w-local case 3 on the uniform line
    std::vector<double> xs;
    for (int i = 0; i <= 40; ++i) xs.push_back(i);
    auto probe = run_pipeline(line_input(xs, {0}), {});
    PipelineOptions opts;
    opts.rho = 16.0 * static_cast<double>(probe.m1_required);
    auto run = run_pipeline(probe.in, opts);
    auto loc = verify_wlocal(run.in.space, run.decomp, run.h, run.atlas.l2,
                             run.atlas.annulus_c, run.rho_used);
    if (loc.case3_pairs == 0 || !loc.violations.empty()) ok = false;
    d << "case3 scope " << loc.case3_pairs << " viol " << loc.violations.size();
  }
  report(8, ok, d.str(), t.seconds());
}

void criterion_9(const fs::path& tmpdir, const std::string& cli) {
  Timer t;
  bool ok = true;
  std::ostringstream detail;

  auto run_cmd = [&cli](const std::string& args, std::string& output) {
    const std::string cmd = cli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    char buf[4096];
    output.clear();
    while (std::size_t got = fread(buf, 1, sizeof(buf), pipe)) output.append(buf, got);
    const int rc = pclose(pipe);
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };

  const fs::path sp = tmpdir / "nc_space.json";
  const fs::path decomp = tmpdir / "nc_decomp.json";
  const fs::path atlas = tmpdir / "nc_atlas.json";
  {
    auto l = line_space({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    write_json_file(space_to_json(l.space, l.coords), sp.string());
  }
  const std::string base_args = "--input " + sp.string() + " --y ids:0";
  std::string out;
  if (run_cmd("whitney " + base_args + " --out " + decomp.string(), out) != 0) ok = false;

  {  // control A: corrupted cube diameter
    json j = read_json_file(decomp.string());
    for (auto& cube : j["cubes"])
      if (cube["diam"].get<double>() > 0.0) {
        cube["diam"] = cube["diam"].get<double>() / 2.0;
        break;
      }
    const fs::path bad = tmpdir / "nc_decomp_diam.json";
    write_json_file(j, bad.string());
    const int rc = run_cmd("verify " + base_args + " --decomp " + bad.string(), out);
    const bool detected = rc != 0 && out.find("whitney-cached-geometry") != std::string::npos &&
                          out.find("cube") != std::string::npos;
    detail << "diam-corruption " << (detected ? "detected" : "MISSED") << "; ";
    if (!detected) ok = false;
  }
  {  // control B: conflicting colors
    json j = read_json_file(decomp.string());
    // find two cubes inside one whitney ball to force a conflict
    auto probe_in = line_input({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, {0});
    auto dec = decomposition_from_json(j, probe_in.space);
    int qa = -1, ra = -1;
    for (std::size_t q = 0; q < dec.cube_count() && qa < 0; ++q)
      for (std::size_t r = q + 1; r < dec.cube_count(); ++r)
        if (dec.colors[q] != dec.colors[r] && dec.whitney_distance(q, r) < dec.rho) {
          qa = static_cast<int>(q);
          ra = static_cast<int>(r);
          break;
        }
    if (qa < 0) {
      ok = false;
      detail << "color-corruption no conflict pair found; ";
    } else {
      j["cubes"][ra]["color"] = j["cubes"][qa]["color"];
      const fs::path bad = tmpdir / "nc_decomp_color.json";
      write_json_file(j, bad.string());
      const int rc = run_cmd("verify " + base_args + " --decomp " + bad.string(), out);
      const bool detected =
          rc != 0 && out.find("coloring-validity") != std::string::npos &&
          out.find("share color") != std::string::npos;
      detail << "color-corruption " << (detected ? "detected" : "MISSED") << "; ";
      if (!detected) ok = false;
    }
  }
  {  // control C: a patch stretched past the bi-Lipschitz budget
    if (run_cmd("whitney " + base_args + " --out " + decomp.string(), out) != 0) ok = false;
    auto in = line_input({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, {0});
    auto run = run_pipeline(in, {});
    json aj = atlas_to_json(run.atlas, run.in.space);
    for (auto& patch : aj["patches"]) {
      if (patch["values"].empty()) continue;
      bool multi = patch["points"].size() >= 2;
      if (!multi) continue;
      for (auto& row : patch["values"])
        for (auto& v : row) v = v.get<double>() * 50.0;
      break;
    }
    write_json_file(aj, atlas.string());
    const int rc = run_cmd("verify " + base_args + " --atlas " + atlas.string(), out);
    const bool detected = rc != 0 && (out.find("patch-bilipschitz") != std::string::npos ||
                                      out.find("witness") != std::string::npos);
    detail << "patch-corruption " << (detected ? "detected" : "MISSED");
    if (!detected) ok = false;
  }
  report(9, ok, detail.str(), t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : BILIP_CLI_PATH;
  std::error_code ec;
  const fs::path tmpdir = fs::temp_directory_path(ec) / "bilip_acceptance";
  fs::create_directories(tmpdir, ec);

  criterion_1();

  // shared pipeline runs
  Timer shared;
  NamedRun line_run{"geomline257", {}};
  {
    auto in = line_input(geometric_line_positions(), {0});
    line_run.run = run_pipeline(std::move(in), {});
  }
  NamedRun grushin_run{"grushin60", {}};
  {
    PipelineOptions opts;
    opts.rho = 4.0;
    grushin_run.run = run_pipeline(grushin_input(60, 1), opts);
  }
  std::printf("  (shared pipeline runs built in %.1fs)\n", shared.seconds());

  std::vector<NamedRun*> both{&line_run, &grushin_run};
  criterion_2(both);
  criterion_3(both);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7(grushin_run, tmpdir);
  criterion_8();
  criterion_9(tmpdir, cli);

  fs::remove_all(tmpdir, ec);
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
