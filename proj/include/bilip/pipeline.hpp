// End-to-end driver shared by the CLI and the test harness: space -> cube
// tree on Omega -> boundary decomposition -> cutoffs -> coloring -> patches
// -> McShane extension -> glued embedding, plus the invariant suite.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bilip/cube_tree.hpp"
#include "bilip/glue.hpp"
#include "bilip/grushin.hpp"
#include "bilip/lipschitz.hpp"
#include "bilip/metric_space.hpp"
#include "bilip/whitney.hpp"

namespace bilip {

struct PipelineInput {
  FiniteMetricSpace space;
  std::vector<std::vector<double>> coords;  // may be empty
  std::vector<std::size_t> y;               // dense indices
  std::shared_ptr<const GrushinSample> grushin;  // set for grushin instances
};

struct PipelineOptions {
  double delta = 0.5;
  double epsilon = 0.5;
  std::optional<double> rho;                 // default 16 * max(M1,1) * max(L1,1)^2
  std::optional<std::pair<int, int>> levels;
  std::optional<double> annulus_c;
  bool relevel = false;
  // patch source: "auto" (charts for grushin, coordinates otherwise),
  // "identity" (coordinates), or "supplied" (caller passes user_atlas)
  std::string patches = "auto";
};

struct PipelineRun {
  PipelineInput in;
  PipelineOptions opts;
  bool omega_empty = false;

  Subspace omega;
  CubeTree tree;
  WhitneyDecomposition decomp;
  CutoffFamily cutoffs;

  LipschitzMap f;       // Y-embedding
  double l1 = 1.0;      // measured bi-Lipschitz constant of f on Y
  double mcshane_l = 0.0;
  LipschitzMap g;

  PatchAtlas atlas;
  ChartAtlasStats chart_stats;
  HField h;
  GlobalEmbedding embedding;

  double rho_used = 0.0;
  std::int64_t m1_required = 0;  // choose_m1 at the measured constants, logged
};

PipelineRun run_pipeline(PipelineInput in, PipelineOptions opts,
                         std::optional<PatchAtlas> user_atlas = std::nullopt);

// Derive the Y-embedding the pipeline would use (exposed for tests).
LipschitzMap derive_y_embedding(const PipelineInput& in, double* l1_out = nullptr);

struct CheckResult {
  std::string name;
  bool hard = true;     // hard failures drive the exit code; soft ones warn
  bool passed = true;
  std::size_t scope = 0, violations = 0;
  std::string detail;   // witness / measured constants
};

// Every module's invariant scan over a finished run.
std::vector<CheckResult> run_verification(const PipelineRun& run);

bool all_hard_passed(const std::vector<CheckResult>& checks);

}  // namespace bilip
