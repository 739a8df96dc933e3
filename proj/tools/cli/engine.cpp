#include "cli/engine.hpp"

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli/csv_io.hpp"
#include "cli/report.hpp"
#include "torograph/circular.hpp"
#include "torograph/cvm_dag.hpp"
#include "torograph/errors.hpp"
#include "torograph/graph_io.hpp"
#include "torograph/inverse_stereographic.hpp"
#include "torograph/nonparanormal.hpp"
#include "torograph/stability.hpp"
#include "torograph/version.hpp"
#include "torograph/wn_fit.hpp"
#include "torograph/wrapped_normal.hpp"

namespace torograph::cli {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunConfig& config, const std::string& name) {
  return (fs::path(config.output) / name).string();
}

void write_json(const RunConfig& config, const std::string& name,
                const ordered_json& doc) {
  write_text_atomic(out_path(config, name), doc.dump(2) + "\n");
}

void write_graph_files(const RunConfig& config, const UndirectedGraph& graph,
                       const EdgeAttrMap& attrs) {
  write_text_atomic(out_path(config, "graph.json"),
                    emit_graph(graph, GraphFormat::json, attrs));
  write_text_atomic(out_path(config, "graph.dot"),
                    emit_graph(graph, GraphFormat::dot, attrs));
}

void write_graph_files(const RunConfig& config, const Dag& dag,
                       const EdgeAttrMap& attrs) {
  write_text_atomic(out_path(config, "graph.json"),
                    emit_graph(dag, GraphFormat::json, attrs));
  write_text_atomic(out_path(config, "graph.dot"),
                    emit_graph(dag, GraphFormat::dot, attrs));
}

void require_output(const RunConfig& config) {
  if (config.output.empty()) {
    throw std::invalid_argument("--output directory is required");
  }
}

std::uint64_t require_seed(const RunConfig& config) {
  if (!config.seed.has_value()) {
    throw std::invalid_argument("--seed is required for stochastic commands");
  }
  return *config.seed;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<int> to_zero_based(const std::vector<int>& one_based, int p,
                               const char* what) {
  std::vector<int> out;
  out.reserve(one_based.size());
  for (int v : one_based) {
    if (v < 1 || v > p) {
      throw std::invalid_argument(std::string(what) + ": index " +
                                  std::to_string(v) + " outside 1.." +
                                  std::to_string(p));
    }
    out.push_back(v - 1);
  }
  return out;
}

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

int run_fit_wn(const RunConfig& config) {
  require_output(config);
  const AngleMatrix data = ingest_csv(config.input, config.unit);
  const CircularSummary summary = circular_summary(data);
  const WindingTruncation trunc{config.truncation, static_cast<int>(data.p())};

  const WnFitResult fit = wn_fit_approx_mle(data, trunc);
  const WnEdgeSelectResult sel =
      config.cov_scale
          ? unwrapped_edge_select_covariance(fit.params, data, trunc, config.alpha)
          : unwrapped_edge_select(fit.params, static_cast<int>(data.n()),
                                  config.alpha);
  UndirectedGraph graph(static_cast<int>(data.p()), data.column_names());
  for (const auto& [i, j] : sel.graph.edges()) graph.add_edge(i, j);

  const double gap = wn_truncation_gap(data, fit.params, config.truncation);
  if (gap > 1e-6) {
    std::cerr << "warning: truncation radius " << config.truncation
              << " may be too small (r vs r+1 log-density gap " << gap << ")\n";
  }

  ordered_json report;
  report["model"] = "wn";
  report["config"] = config_json(config);
  report["data"] = {{"n", data.n()}, {"p", data.p()}, {"columns", data.column_names()}};
  report["summary"] = summary_json(summary, data.column_names());
  report["estimates"]["mu"] = vector_json(fit.params.mu());
  report["estimates"]["sigma"] = matrix_json(fit.params.sigma());
  report["log_likelihood"] = fit.log_likelihood;
  report["edge_report"] = edge_report_json(sel.report);
  report["stability_report"] = nullptr;
  report["diagnostics"] = {{"iterations", fit.iterations},
                           {"converged", true},
                           {"sigma_condition_number", condition_number(fit.params.sigma())},
                           {"truncation_saturation_gap", gap},
                           {"edge_scale", config.cov_scale ? "covariance" : "precision"}};
  write_json(config, "report.json", report);
  write_graph_files(config, graph, edge_attrs(sel.report));
  return kExitOk;
}

ordered_json stability_json(const StabilityReport& rep) {
  ordered_json j;
  j["repeats"] = rep.repeats;
  j["folds"] = rep.folds;
  j["threshold"] = rep.threshold;
  j["failed_repeats"] = rep.failed_repeats;
  j["rho_grid"] = vector_json(rep.rho_grid);
  j["chosen_rho"] = rep.chosen_rho;
  j["frequency"] = matrix_json(rep.frequency);
  return j;
}

int run_fit_isn(const RunConfig& config, bool nonparanormal) {
  require_output(config);
  const std::uint64_t seed = require_seed(config);
  const AngleMatrix data = ingest_csv(config.input, config.unit);
  const CircularSummary summary = circular_summary(data);

  StabilityOptions opts;
  opts.folds = config.folds;
  opts.repeats = config.repeats;
  opts.threshold = config.threshold;
  opts.seed = seed;
  opts.epsilon = config.epsilon;
  if (!config.rho_grid.empty()) opts.rho_grid = to_vector(config.rho_grid);

  const StabilityResult sel = stability_select(
      data, nonparanormal ? IsnModelKind::isnpn : IsnModelKind::isn, opts);
  UndirectedGraph graph(static_cast<int>(data.p()), data.column_names());
  for (const auto& [i, j] : sel.graph.edges()) graph.add_edge(i, j);

  ordered_json report;
  report["model"] = nonparanormal ? "isnpn" : "isn";
  report["config"] = config_json(config);
  report["data"] = {{"n", data.n()}, {"p", data.p()}, {"columns", data.column_names()}};
  report["summary"] = summary_json(summary, data.column_names());
  if (nonparanormal) {
    const NpnTransform transform = npn_estimate_transforms(data, config.epsilon);
    const Eigen::MatrixXd cov = npn_correlation(data, transform, config.epsilon);
    Eigen::VectorXd mu(data.p());
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      mu(j) = transform.coordinate(j).target_mean;
    }
    report["estimates"]["mu"] = vector_json(mu);
    report["estimates"]["sigma"] = matrix_json(cov);
    report["estimates"]["transform"] = {
        {"truncation_level", transform.delta()},
        {"derivative_floor", transform.derivative_floor()}};
  } else {
    const IsnParams fit = isn_fit(data, config.epsilon);
    report["estimates"]["mu"] = vector_json(fit.mu());
    report["estimates"]["sigma"] = matrix_json(fit.sigma());
    report["estimates"]["epsilon"] = fit.epsilon();
  }
  report["log_likelihood"] = nullptr;
  report["edge_report"] = edge_report_json(sel.edge_report);
  report["stability_report"] = stability_json(sel.report);
  report["diagnostics"] = {
      {"failed_repeats", sel.report.failed_repeats},
      {"precision_condition_number", condition_number(sel.precision)}};
  write_json(config, "report.json", report);
  write_graph_files(config, graph, edge_attrs(sel.edge_report));
  return kExitOk;
}

int run_fit_cvm_dag(const RunConfig& config) {
  require_output(config);
  if (config.ordering.empty()) {
    throw std::invalid_argument(
        "--ordering is required: the node ordering must be known in advance "
        "for the conditional von Mises DAG");
  }
  const AngleMatrix data = ingest_csv(config.input, config.unit);
  const std::vector<int> ordering =
      to_zero_based(config.ordering, static_cast<int>(data.p()), "--ordering");

  CvmSelectOptions opts;
  opts.holm = config.holm;
  const CvmSelectResult sel = cvm_lrt_select(data, ordering, config.alpha, opts);

  ordered_json report;
  report["model"] = "cvm-dag";
  report["config"] = config_json(config);
  report["data"] = {{"n", data.n()}, {"p", data.p()}, {"columns", data.column_names()}};
  report["summary"] = summary_json(circular_summary(data), data.column_names());
  ordered_json nodes = ordered_json::array();
  for (int j = 0; j < sel.dag.p(); ++j) {
    ordered_json node;
    node["j"] = j + 1;
    node["name"] = data.column_names()[j];
    node["mu"] = sel.model.mu()(j);
    node["kappa"] = sel.model.kappa()(j);
    ordered_json parents = ordered_json::array();
    const auto& pa = sel.dag.parents(j);
    for (std::size_t k = 0; k < pa.size(); ++k) {
      parents.push_back({{"i", pa[k] + 1}, {"lambda", sel.model.lambda(j)[k]}});
    }
    node["parents"] = parents;
    nodes.push_back(node);
  }
  report["estimates"]["ordering"] = config.ordering;
  report["estimates"]["nodes"] = nodes;
  report["log_likelihood"] = cvm_log_likelihood(data, sel.model);
  report["edge_report"] = edge_report_json(sel.report);
  report["stability_report"] = nullptr;
  report["diagnostics"] = {{"tested_edges", sel.report.size()},
                           {"holm", config.holm}};
  write_json(config, "report.json", report);
  write_graph_files(config, sel.dag, edge_attrs(sel.report, /*directed=*/true));
  return kExitOk;
}

// --- simulate ---------------------------------------------------------

nlohmann::json load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open params file '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error("params file '" + path + "': " + e.what());
  }
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  Eigen::Index idx = 0;
  for (const auto& x : j) v(idx++) = x.get<double>();
  return v;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) throw parse_error("params: empty matrix");
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw parse_error("params: ragged matrix");
    }
    Eigen::Index c = 0;
    for (const auto& x : row) m(r, c++) = x.get<double>();
    ++r;
  }
  return m;
}

std::vector<std::string> labels_or_default(const nlohmann::json& j, Eigen::Index p) {
  if (j.contains("labels")) {
    return j.at("labels").get<std::vector<std::string>>();
  }
  std::vector<std::string> names;
  for (Eigen::Index v = 0; v < p; ++v) names.push_back("theta" + std::to_string(v + 1));
  return names;
}

int run_simulate(const RunConfig& config) {
  require_output(config);
  const std::uint64_t seed = require_seed(config);
  if (config.sim_n < 1) {
    throw std::invalid_argument("simulate: --n must be >= 1");
  }

  ordered_json manifest;
  manifest["config"] = config_json(config);
  manifest["model"] = config.model;
  manifest["n"] = config.sim_n;

  if (config.model == "wn") {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    std::vector<std::string> names;
    if (!config.params_path.empty()) {
      const auto j = load_params_file(config.params_path);
      mu = json_vector(j.at("mu"));
      sigma = json_matrix(j.at("sigma"));
      names = labels_or_default(j, mu.size());
    } else {
      if (config.sim_p < 1) {
        throw std::invalid_argument("simulate: --p or --params is required");
      }
      mu = Eigen::VectorXd::Zero(config.sim_p);
      sigma = 0.25 * Eigen::MatrixXd::Identity(config.sim_p, config.sim_p);
      names = labels_or_default(nlohmann::json::object(), config.sim_p);
    }
    const WnSample sample = wn_sample(WnParams(mu, sigma), config.sim_n, seed, names);
    write_angles_csv(out_path(config, "samples.csv"), sample.angles, config.unit);
    write_winding_csv(out_path(config, "windings.csv"), sample.windings, names);
    manifest["outputs"] = {"samples.csv", "windings.csv"};
  } else if (config.model == "isn") {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    std::vector<std::string> names;
    double epsilon = config.epsilon;
    if (!config.params_path.empty()) {
      const auto j = load_params_file(config.params_path);
      mu = json_vector(j.at("mu"));
      sigma = json_matrix(j.at("sigma"));
      names = labels_or_default(j, mu.size());
      if (j.contains("epsilon")) epsilon = j.at("epsilon").get<double>();
    } else {
      if (config.sim_p < 1) {
        throw std::invalid_argument("simulate: --p or --params is required");
      }
      mu = Eigen::VectorXd::Zero(config.sim_p);
      sigma = Eigen::MatrixXd::Identity(config.sim_p, config.sim_p);
      names = labels_or_default(nlohmann::json::object(), config.sim_p);
    }
    const AngleMatrix sample =
        isn_sample(IsnParams(mu, sigma, epsilon), config.sim_n, seed, names);
    write_angles_csv(out_path(config, "samples.csv"), sample, config.unit);
    manifest["outputs"] = {"samples.csv"};
  } else if (config.model == "cvm-dag") {
    if (config.params_path.empty()) {
      throw std::invalid_argument("simulate: --params is required for cvm-dag");
    }
    const auto j = load_params_file(config.params_path);
    const auto ordering_1b = j.at("ordering").get<std::vector<int>>();
    const int p = static_cast<int>(ordering_1b.size());
    const std::vector<int> ordering = to_zero_based(ordering_1b, p, "ordering");
    Eigen::VectorXd mu(p), kappa(p);
    std::vector<std::vector<int>> parents(p);
    std::vector<std::vector<double>> lambda(p);
    for (const auto& node : j.at("nodes")) {
      const int node_j = node.at("j").get<int>() - 1;
      if (node_j < 0 || node_j >= p) throw parse_error("params: node index out of range");
      mu(node_j) = node.at("mu").get<double>();
      kappa(node_j) = node.at("kappa").get<double>();
      for (const auto& pa : node.at("parents")) {
        parents[node_j].push_back(pa.at("i").get<int>() - 1);
        lambda[node_j].push_back(pa.at("lambda").get<double>());
      }
    }
    const std::vector<std::string> names = labels_or_default(j, p);
    const CvmDagModel model(Dag(ordering, parents, names), mu, kappa, lambda);
    AngleMatrix sample = cvm_sample(model, config.sim_n, seed);
    write_angles_csv(out_path(config, "samples.csv"), sample, config.unit);
    manifest["outputs"] = {"samples.csv"};
  } else {
    throw std::invalid_argument("simulate: --model must be wn, isn or cvm-dag");
  }
  write_json(config, "simulate.json", manifest);
  return kExitOk;
}

int run_ci_query(const RunConfig& config) {
  if (config.set_a.empty() || config.set_c.empty()) {
    throw std::invalid_argument("ci-query: --A and --C are required");
  }
  ordered_json result;
  bool independent = false;
  if (!config.graph_path.empty()) {
    std::ifstream in(config.graph_path);
    if (!in) throw parse_error("cannot open graph file '" + config.graph_path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    const auto parsed = parse_graph_json(text);
    if (!std::holds_alternative<UndirectedGraph>(parsed)) {
      throw std::invalid_argument("ci-query: separation needs an undirected graph");
    }
    const UndirectedGraph& g = std::get<UndirectedGraph>(parsed);
    independent = separates(g, to_zero_based(config.set_a, g.p(), "--A"),
                            to_zero_based(config.set_c, g.p(), "--C"),
                            to_zero_based(config.set_s, g.p(), "--S"));
    result["method"] = "graph-separation";
  } else if (!config.sigma_path.empty()) {
    const Eigen::MatrixXd sigma = read_matrix_csv(config.sigma_path);
    const int p = static_cast<int>(sigma.rows());
    independent = isn_ci_query(sigma, to_zero_based(config.set_a, p, "--A"),
                               to_zero_based(config.set_c, p, "--C"),
                               to_zero_based(config.set_s, p, "--S"));
    result["method"] = "isn-precision";
  } else {
    throw std::invalid_argument("ci-query: provide --graph or --sigma");
  }
  result["A"] = config.set_a;
  result["C"] = config.set_c;
  result["S"] = config.set_s;
  result["independent"] = independent;
  std::cout << result.dump(2) << "\n";
  if (!config.output.empty()) write_json(config, "ci_query.json", result);
  return kExitOk;
}

int run_summary(const RunConfig& config) {
  require_output(config);
  const AngleMatrix data = ingest_csv(config.input, config.unit);
  const CircularSummary summary = circular_summary(data);

  ordered_json report;
  report["model"] = "summary";
  report["config"] = config_json(config);
  report["data"] = {{"n", data.n()}, {"p", data.p()}, {"columns", data.column_names()}};
  report["summary"] = summary_json(summary, data.column_names());

  const auto pairs = resolve_pairs(config.pairs, data.column_names());
  if (export_ramachandran(data, pairs, out_path(config, "ramachandran.csv"))) {
    ordered_json exported = ordered_json::array();
    for (const auto& [a, b] : pairs) exported.push_back(a + ":" + b);
    report["ramachandran"] = {{"file", "ramachandran.csv"}, {"pairs", exported}};
  } else {
    std::cerr << "warning: no (phi, psi) pairs resolved, scatter export skipped\n";
    report["ramachandran"] = nullptr;
  }
  write_json(config, "summary.json", report);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config) {
  int code = kExitOk;
  std::string message;
  try {
    switch (config.command) {
      case Command::fit_wn: return run_fit_wn(config);
      case Command::fit_isn: return run_fit_isn(config, false);
      case Command::fit_isnpn: return run_fit_isn(config, true);
      case Command::fit_cvm_dag: return run_fit_cvm_dag(config);
      case Command::simulate: return run_simulate(config);
      case Command::ci_query: return run_ci_query(config);
      case Command::summary: return run_summary(config);
    }
    throw std::invalid_argument("unknown command");
  } catch (const parse_error& e) {
    code = kExitParse;
    message = e.what();
  } catch (const convergence_error& e) {
    code = kExitNoConvergence;
    message = e.what();
  } catch (const numerical_error& e) {
    code = kExitNumerical;
    message = e.what();
  } catch (const std::invalid_argument& e) {
    code = kExitConfig;
    message = e.what();
  } catch (const std::exception& e) {
    code = kExitNumerical;
    message = e.what();
  }
  std::cerr << "error: " << message << "\n";
  if (config.error_json) {
    ordered_json err;
    err["error"] = {{"message", message}, {"exit_code", code}};
    std::cout << err.dump(2) << "\n";
  }
  return code;
}

}  // namespace torograph::cli
