#include "cli/report.hpp"

#include <algorithm>

#include "torograph/graph_io.hpp"
#include "torograph/version.hpp"

namespace torograph::cli {

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::fit_wn: return "fit-wn";
    case Command::fit_isn: return "fit-isn";
    case Command::fit_isnpn: return "fit-isnpn";
    case Command::fit_cvm_dag: return "fit-cvm-dag";
    case Command::simulate: return "simulate";
    case Command::ci_query: return "ci-query";
    case Command::summary: return "summary";
  }
  return "?";
}

ordered_json optional_number(const std::optional<double>& v) {
  if (v.has_value()) return *v;
  return nullptr;
}

}  // namespace

ordered_json config_json(const RunConfig& config) {
  ordered_json j;
  j["command"] = command_name(config.command);
  j["version"] = kVersion;
  j["input"] = config.input;
  j["unit"] = config.unit == AngleUnit::degrees ? "degrees" : "radians";
  j["alpha"] = config.alpha;
  j["truncation"] = config.truncation;
  j["folds"] = config.folds;
  j["repeats"] = config.repeats;
  j["threshold"] = config.threshold;
  j["epsilon"] = config.epsilon;
  j["holm"] = config.holm;
  j["cov_scale"] = config.cov_scale;
  if (config.rho_grid.empty()) {
    j["rho_grid"] = "auto";
  } else {
    j["rho_grid"] = config.rho_grid;
  }
  if (!config.ordering.empty()) j["ordering"] = config.ordering;
  if (config.seed.has_value()) {
    j["seed"] = *config.seed;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

ordered_json summary_json(const CircularSummary& summary,
                          const std::vector<std::string>& columns) {
  ordered_json cols = ordered_json::array();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    ordered_json c;
    c["name"] = columns[j];
    c["mean_direction"] = summary.mean_direction[j].radians();
    c["mean_resultant_length"] = summary.mean_resultant_length(j);
    c["mardia_variance"] = summary.mardia_variance(j);
    c["circular_variance"] = summary.circular_variance(j);
    cols.push_back(c);
  }
  return cols;
}

ordered_json edge_report_json(const EdgeReport& report) {
  EdgeReport sorted = report;
  std::sort(sorted.begin(), sorted.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  ordered_json rows = ordered_json::array();
  for (const auto& rec : sorted) {
    ordered_json r;
    r["i"] = rec.i + 1;
    r["j"] = rec.j + 1;
    r["statistic"] = optional_number(rec.statistic);
    r["p_value"] = optional_number(rec.p_value);
    r["adjusted_p"] = optional_number(rec.adjusted_p);
    r["selected"] = rec.selected;
    r["stability"] = optional_number(rec.stability);
    r["weight"] = optional_number(rec.weight);
    rows.push_back(r);
  }
  return rows;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json row = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
  return row;
}

EdgeAttrMap edge_attrs(const EdgeReport& report, bool directed) {
  EdgeAttrMap attrs;
  for (const auto& rec : report) {
    EdgeAttr a;
    a.weight = rec.weight;
    a.p_value = rec.adjusted_p.has_value() ? rec.adjusted_p : rec.p_value;
    a.stability = rec.stability;
    if (directed) {
      attrs[{rec.i, rec.j}] = a;
    } else {
      attrs[{std::min(rec.i, rec.j), std::max(rec.i, rec.j)}] = a;
    }
  }
  return attrs;
}

}  // namespace torograph::cli
