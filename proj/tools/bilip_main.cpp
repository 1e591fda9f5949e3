// Command-line surface: diagnose, cubes, whitney, color, embed, verify,
// grushin-dist, grushin-mesh.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "bilip/generators.hpp"
#include "bilip/io.hpp"
#include "bilip/pipeline.hpp"

using namespace bilip;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

GrushinWindow parse_window(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 4) throw CLI::ValidationError("window must be x0,x1,y0,y1");
  return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
}

GrushinPoint parse_point(const std::string& s) {
  auto parts = split(s, ',');
  if (parts.size() != 2) throw CLI::ValidationError("point must be x,y");
  return {std::stod(parts[0]), std::stod(parts[1])};
}

std::pair<int, int> parse_levels(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw CLI::ValidationError("levels must be k_min:k_max");
  return {std::stoi(parts[0]), std::stoi(parts[1])};
}

// generator grammar: grid:R:C[:spacing] | line:n | geomline:count[:log2ratio] |
// cloud:n[:seed] | grushin:nx[:ny[:stride]]
PipelineInput generate_input(const std::string& spec, std::uint64_t seed,
                             const GrushinWindow& window) {
  auto parts = split(spec, ':');
  const std::string kind = parts.empty() ? "" : parts[0];
  auto coord_input = [](CoordSpace cs) {
    PipelineInput in;
    in.space = std::move(cs.space);
    in.coords = std::move(cs.coords);
    return in;
  };
  if (kind == "grid") {
    const int r = std::stoi(parts.at(1));
    const int c = std::stoi(parts.at(2));
    const double spacing = parts.size() > 3 ? std::stod(parts[3]) : 1.0 / std::max(1, r - 1);
    return coord_input(grid_space(r, c, spacing));
  }
  if (kind == "line") {
    const int n = std::stoi(parts.at(1));
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = i;
    return coord_input(line_space(std::move(xs)));
  }
  if (kind == "geomline") {
    const int n = std::stoi(parts.at(1));
    const double log2ratio = parts.size() > 2 ? std::stod(parts[2]) : 0.125;
    return coord_input(geometric_line(n, std::pow(2.0, -log2ratio), true));
  }
  if (kind == "cloud") {
    const int n = std::stoi(parts.at(1));
    const std::uint64_t s = parts.size() > 2 ? std::stoull(parts[2]) : seed;
    return coord_input(random_cloud(n, s));
  }
  if (kind == "grushin") {
    const int nx = std::stoi(parts.at(1));
    const int ny = parts.size() > 2 ? std::stoi(parts[2]) : nx;
    const int stride = parts.size() > 3 ? std::stoi(parts[3]) : 1;
    PipelineInput in;
    auto sample = std::make_shared<GrushinSample>(build_grushin_sample(window, nx, ny, stride));
    in.space = sample->space;
    in.coords = sample->coords;
    in.grushin = sample;
    return in;
  }
  throw CLI::ValidationError("unknown generator '" + spec + "'");
}

struct CommonArgs {
  std::string input, generate, y_spec = "axis", config;
  std::string window_str = "-1,1,-1,1";
  std::uint64_t seed = 0;
  double delta = 0.5, epsilon = 0.5;
  double rho = 0.0;            // 0 = default 16*M1*L1^2
  double annulus_c = 0.0;      // 0 = default 2*L2+1
  std::string levels;          // "" = automatic
  std::string patches = "auto";
  bool relevel = false, strict = false;
};

void add_input_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--input", a.input, "space JSON file");
  cmd->add_option("--generate", a.generate,
                  "generator: grid:R:C[:h] | line:n | geomline:n[:log2ratio] | "
                  "cloud:n[:seed] | grushin:nx[:ny[:stride]]");
  cmd->add_option("--window", a.window_str, "grushin window x0,x1,y0,y1");
  cmd->add_option("--seed", a.seed, "generator seed");
  cmd->add_option("--config", a.config, "JSON config file; explicit flags win");
}

void add_pipeline_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--y", a.y_spec, "Y selector: axis | ids:1,2,3 | <json file>");
  cmd->add_option("--delta", a.delta, "cube tree scale ratio");
  cmd->add_option("--epsilon", a.epsilon, "halo gap factor");
  cmd->add_option("--rho", a.rho, "coloring radius override (default 16*M1*L1^2)");
  cmd->add_option("--levels", a.levels, "tree level range k_min:k_max");
  cmd->add_option("--annulus-c", a.annulus_c, "patch annulus constant");
  cmd->add_option("--patches", a.patches, "auto | identity | <atlas json file>");
  cmd->add_flag("--relevel", a.relevel, "replace whitney-violating cubes by their children");
  cmd->add_flag("--strict", a.strict, "warnings also fail the exit code");
}

void apply_config(const CLI::App* cmd, CommonArgs& a) {
  if (a.config.empty()) return;
  const json j = read_json_file(a.config);
  auto flag_given = [cmd](const std::string& name) {
    return cmd->count(name) > 0;
  };
  auto set_str = [&](const char* key, const char* flag, std::string& dst) {
    if (j.contains(key) && !flag_given(flag)) dst = j[key].get<std::string>();
  };
  set_str("input", "--input", a.input);
  set_str("generate", "--generate", a.generate);
  set_str("y", "--y", a.y_spec);
  set_str("window", "--window", a.window_str);
  set_str("levels", "--levels", a.levels);
  set_str("patches", "--patches", a.patches);
  if (j.contains("seed") && !flag_given("--seed")) a.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("delta") && !flag_given("--delta")) a.delta = j["delta"].get<double>();
  if (j.contains("epsilon") && !flag_given("--epsilon")) a.epsilon = j["epsilon"].get<double>();
  if (j.contains("rho") && !flag_given("--rho")) a.rho = j["rho"].get<double>();
  if (j.contains("annulus_c") && !flag_given("--annulus-c"))
    a.annulus_c = j["annulus_c"].get<double>();
  if (j.contains("relevel") && !flag_given("--relevel")) a.relevel = j["relevel"].get<bool>();
  if (j.contains("strict") && !flag_given("--strict")) a.strict = j["strict"].get<bool>();
}

PipelineInput load_input(const CommonArgs& a) {
  if (!a.input.empty()) return load_space_file(a.input);
  if (!a.generate.empty()) return generate_input(a.generate, a.seed, parse_window(a.window_str));
  throw CLI::ValidationError("need --input or --generate");
}

PipelineOptions pipeline_options(const CommonArgs& a) {
  PipelineOptions o;
  o.delta = a.delta;
  o.epsilon = a.epsilon;
  if (a.rho > 0.0) o.rho = a.rho;
  if (a.annulus_c > 0.0) o.annulus_c = a.annulus_c;
  o.relevel = a.relevel;
  o.patches = a.patches == "identity" ? "identity" : "auto";
  if (!a.levels.empty()) o.levels = parse_levels(a.levels);
  return o;
}

std::optional<PatchAtlas> load_user_atlas(const CommonArgs& a, const FiniteMetricSpace& space) {
  if (a.patches == "auto" || a.patches == "identity") return std::nullopt;
  return atlas_from_json(read_json_file(a.patches), space);
}

void emit(const json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << std::endl;
  else
    write_json_file(j, path);
}

void print_check_table(const std::vector<CheckResult>& checks) {
  std::printf("%-26s %-5s %-6s %12s %10s  %s\n", "check", "kind", "status", "scope",
              "violations", "detail");
  for (const auto& c : checks)
    std::printf("%-26s %-5s %-6s %12zu %10zu  %s\n", c.name.c_str(), c.hard ? "hard" : "warn",
                c.passed ? "pass" : "FAIL", c.scope, c.violations, c.detail.c_str());
}

int exit_code(const std::vector<CheckResult>& checks, bool strict) {
  bool warn_failed = false;
  for (const auto& c : checks) {
    if (c.hard && !c.passed) return 1;
    if (!c.hard && !c.passed) warn_failed = true;
  }
  return strict && warn_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-to-global bi-Lipschitz embedding toolkit"};
  app.require_subcommand(1);

  CommonArgs a;
  std::string out, report_path, decomp_path, atlas_path, from_str, to_str;
  std::string mesh_levels = "1:6";
  int nx = 100, ny = 0;
  bool y_given_tracker = false;
  (void)y_given_tracker;

  auto* cmd_diag = app.add_subcommand("diagnose", "space diagnostics (doubling, perfectness)");
  add_input_flags(cmd_diag, a);
  cmd_diag->add_option("--out", out, "output JSON path (default stdout)");

  auto* cmd_cubes = app.add_subcommand("cubes", "build the nested cube hierarchy");
  add_input_flags(cmd_cubes, a);
  add_pipeline_flags(cmd_cubes, a);
  cmd_cubes->add_option("--out", out, "tree JSON path (default stdout)");

  auto* cmd_whitney = app.add_subcommand("whitney", "boundary-layer cube decomposition");
  add_input_flags(cmd_whitney, a);
  add_pipeline_flags(cmd_whitney, a);
  cmd_whitney->add_option("--out", out, "decomposition JSON path (default stdout)");

  auto* cmd_color = app.add_subcommand("color", "(re)color a decomposition at a given radius");
  add_input_flags(cmd_color, a);
  add_pipeline_flags(cmd_color, a);
  cmd_color->add_option("--decomp", decomp_path, "decomposition JSON to recolor");
  cmd_color->add_option("--out", out, "colored decomposition JSON (default stdout)");

  auto* cmd_embed = app.add_subcommand("embed", "full pipeline to the glued embedding");
  add_input_flags(cmd_embed, a);
  add_pipeline_flags(cmd_embed, a);
  cmd_embed->add_option("--out", out, "embedding CSV path");
  cmd_embed->add_option("--report", report_path, "report JSON path (default stdout)");

  auto* cmd_verify = app.add_subcommand("verify", "run every invariant scan, print a table");
  add_input_flags(cmd_verify, a);
  add_pipeline_flags(cmd_verify, a);
  cmd_verify->add_option("--decomp", decomp_path, "load a decomposition instead of rebuilding");
  cmd_verify->add_option("--atlas", atlas_path, "load a patch atlas instead of rebuilding");
  cmd_verify->add_option("--report", report_path, "also write the table as JSON");

  auto* cmd_gdist = app.add_subcommand("grushin-dist", "grid oracle distance between points");
  cmd_gdist->add_option("--from", from_str, "x,y")->required();
  cmd_gdist->add_option("--to", to_str, "x,y")->required();
  cmd_gdist->add_option("--nx", nx, "grid resolution (x nodes across the window)");
  cmd_gdist->add_option("--ny", ny, "grid resolution in y (default nx)");
  cmd_gdist->add_option("--window", a.window_str, "window x0,x1,y0,y1");

  auto* cmd_gmesh = app.add_subcommand("grushin-mesh", "dyadic boundary mesh of the window");
  cmd_gmesh->add_option("--window", a.window_str, "window x0,x1,y0,y1");
  cmd_gmesh->add_option("--levels", mesh_levels, "dyadic level range j_min:j_max");
  cmd_gmesh->add_option("--out", out, "mesh JSON path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* active = app.get_subcommands().front();
    apply_config(active, a);

    if (cmd_diag->parsed()) {
      auto in = load_input(a);
      emit(diagnostics_to_json(diagnose(in.space), in.space.size()), out);
      return 0;
    }

    if (cmd_cubes->parsed()) {
      auto in = load_input(a);
      FiniteMetricSpace target = in.space;
      if (cmd_cubes->count("--y") > 0 || in.grushin) {
        auto y = resolve_y(in, a.y_spec);
        std::vector<std::size_t> omega;
        for (std::size_t p = 0; p < in.space.size(); ++p)
          if (!std::binary_search(y.begin(), y.end(), p)) omega.push_back(p);
        target = restrict_to(in.space, omega).space;
      }
      auto range =
          a.levels.empty() ? default_level_range(target, a.delta) : parse_levels(a.levels);
      auto tree = build_cube_tree(target, a.delta, range.first, range.second);
      emit(tree_to_json(tree, target), out);
      return 0;
    }

    if (cmd_gdist->parsed()) {
      if (ny == 0) ny = nx;
      GrushinGrid grid(parse_window(a.window_str), nx, ny);
      auto c = grid.distance_checked(parse_point(from_str), parse_point(to_str));
      json j;
      j["distance"] = c.value;
      j["analytic_lower"] = c.lower;
      j["analytic_upper"] = c.upper;
      j["within_bracket"] = c.within;
      std::cout << j.dump(2) << std::endl;
      return 0;
    }

    if (cmd_gmesh->parsed()) {
      auto range = parse_levels(mesh_levels);
      auto mesh = build_grushin_mesh(range.first, range.second, parse_window(a.window_str));
      emit(mesh_to_json(mesh), out);
      return 0;
    }

    // pipeline commands
    auto in = load_input(a);
    in.y = resolve_y(in, a.y_spec);
    auto opts = pipeline_options(a);
    auto user_atlas = load_user_atlas(a, in.space);
    auto run = run_pipeline(std::move(in), opts, std::move(user_atlas));

    if (cmd_whitney->parsed()) {
      emit(decomposition_to_json(run.decomp, run.in.space), out);
      return 0;
    }

    if (cmd_color->parsed()) {
      WhitneyDecomposition d = run.decomp;
      if (!decomp_path.empty())
        d = decomposition_from_json(read_json_file(decomp_path), run.in.space);
      color_cubes(d, a.rho > 0.0 ? a.rho : run.rho_used);
      emit(decomposition_to_json(d, run.in.space), out);
      return 0;
    }

    if (cmd_embed->parsed()) {
      if (!out.empty()) write_embedding_csv(run, out);
      json rep = embedding_report_json(run);
      auto checks = run_verification(run);
      rep["checks"] = checks_to_json(checks);
      if (!run.omega_empty) {
        rep["w_large"] = wlarge_to_json(
            verify_wlarge_scale(run.in.space, run.decomp, run.g,
                                static_cast<double>(run.f.dim()), run.l1, run.rho_used));
        rep["w_local"] = wlocal_to_json(verify_wlocal(
            run.in.space, run.decomp, run.h, run.atlas.l2, run.atlas.annulus_c,
            run.rho_used));
      }
      emit(rep, report_path);
      if (run.embedding.report.infinite_contraction) return 1;
      return a.strict ? exit_code(checks, true) : 0;
    }

    // verify: loaded artifacts replace the computed stages; downstream
    // rebuilds run best-effort so a corrupted stage surfaces as a check
    // instead of derailing the whole table
    std::vector<CheckResult> extra;
    if (!decomp_path.empty()) {
      run.decomp = decomposition_from_json(read_json_file(decomp_path), run.in.space);
      if (run.decomp.colors.empty())
        color_cubes(run.decomp, a.rho > 0.0 ? a.rho : run.rho_used);
      run.cutoffs = build_cutoffs(run.decomp, run.in.space);
    }
    if (!atlas_path.empty()) {
      PatchAtlas loaded = atlas_from_json(read_json_file(atlas_path), run.in.space);
      try {
        normalize_atlas(run.in.space, run.decomp, run.cutoffs, loaded,
                        a.annulus_c > 0.0 ? std::optional<double>(a.annulus_c) : std::nullopt);
        run.atlas = std::move(loaded);
      } catch (const std::exception& e) {
        extra.push_back(CheckResult{"patch-atlas-load", true, false, 1, 1, e.what()});
      }
    }
    if (!decomp_path.empty() || !atlas_path.empty()) {
      try {
        if (!run.atlas.normalized() || !decomp_path.empty())
          normalize_atlas(run.in.space, run.decomp, run.cutoffs, run.atlas,
                          a.annulus_c > 0.0 ? std::optional<double>(a.annulus_c)
                                            : std::nullopt);
        run.h = assemble_H(run.in.space, run.decomp, run.atlas);
        run.embedding = assemble_F(run.in.space, run.decomp, run.g, run.h, run.l1,
                                   run.atlas.l2, run.rho_used);
      } catch (const std::exception& e) {
        extra.push_back(CheckResult{"artifact-rebuild", true, false, 1, 1, e.what()});
      }
    }
    auto checks = run_verification(run);
    checks.insert(checks.end(), extra.begin(), extra.end());
    print_check_table(checks);
    if (!report_path.empty()) write_json_file(checks_to_json(checks), report_path);
    return exit_code(checks, a.strict);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
