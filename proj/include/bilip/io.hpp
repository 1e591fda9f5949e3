// JSON / CSV serialization of spaces, trees, decompositions, atlases,
// meshes and embedding reports.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bilip/pipeline.hpp"

namespace bilip {

using json = nlohmann::json;

// { "points": [...], "coords": [[..]..], "metric": "matrix"|"euclidean"|"grushin",
//   "matrix": lower-triangular row list, "weights": [...],
//   "grushin": {"window": [x0,x1,y0,y1], "nx":, "ny":, "stride":} }
PipelineInput load_space_json(const json& j);
PipelineInput load_space_file(const std::string& path);
json space_to_json(const FiniteMetricSpace& space,
                   const std::vector<std::vector<double>>& coords = {});

// Y selector: "axis" (grushin band), "ids:1,2,3", or a JSON file with an id array.
std::vector<std::size_t> resolve_y(const PipelineInput& in, const std::string& selector);

json diagnostics_to_json(const SpaceDiagnostics& d, std::size_t n);
json tree_to_json(const CubeTree& tree, const FiniteMetricSpace& space);

json decomposition_to_json(const WhitneyDecomposition& d, const FiniteMetricSpace& space);
// Stored diam/dist/colors are kept as-is so a verifier can cross-check them.
WhitneyDecomposition decomposition_from_json(const json& j, const FiniteMetricSpace& space);

json atlas_to_json(const PatchAtlas& atlas, const FiniteMetricSpace& space);
PatchAtlas atlas_from_json(const json& j, const FiniteMetricSpace& space);

json mesh_to_json(const std::vector<GrushinMeshCube>& mesh);

json distortion_to_json(const DistortionReport& r);
json wlarge_to_json(const WLargeReport& r);
json wlocal_to_json(const WLocalReport& r);
json embedding_report_json(const PipelineRun& run);
json checks_to_json(const std::vector<CheckResult>& checks);

void write_embedding_csv(const PipelineRun& run, const std::string& path);

json read_json_file(const std::string& path);
void write_json_file(const json& j, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace bilip
