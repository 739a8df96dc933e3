#pragma once

#include <string>

#include "cli/run_config.hpp"
#include "json.hpp"
#include "torograph/angle_matrix.hpp"
#include "torograph/circular.hpp"
#include "torograph/graph.hpp"
#include "torograph/graph_io.hpp"

namespace torograph::cli {

using ordered_json = nlohmann::ordered_json;

/// Config echo embedded in every report (provenance).
ordered_json config_json(const RunConfig& config);

ordered_json summary_json(const CircularSummary& summary,
                          const std::vector<std::string>& columns);

/// Edge report rows with 1-based indices, sorted by (i, j).
ordered_json edge_report_json(const EdgeReport& report);

ordered_json matrix_json(const Eigen::MatrixXd& m);
ordered_json vector_json(const Eigen::VectorXd& v);

/// Per-edge attributes for the graph emitters, from an edge report. Keys
/// are (min, max) for undirected graphs, (parent, child) for DAGs.
EdgeAttrMap edge_attrs(const EdgeReport& report, bool directed = false);

}  // namespace torograph::cli
