#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/engine.hpp"
#include "cli/run_config.hpp"
#include "torograph/version.hpp"

namespace {

using torograph::cli::AngleUnit;
using torograph::cli::Command;
using torograph::cli::RunConfig;

void add_io_options(CLI::App* cmd, RunConfig& config, bool needs_input = true) {
  if (needs_input) {
    cmd->add_option("--input", config.input, "CSV of angles, one header row")
        ->required();
  }
  cmd->add_option("--output", config.output, "output directory")->required();
  cmd->add_flag_callback(
      "--degrees", [&config] { config.unit = AngleUnit::degrees; },
      "input angles are in degrees");
}

void add_seed(CLI::App* cmd, RunConfig& config, bool required) {
  auto* opt = cmd->add_option_function<std::uint64_t>(
      "--seed", [&config](std::uint64_t s) { config.seed = s; },
      "random seed (stochastic commands replay exactly)");
  if (required) opt->required();
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"toroidal graphical models for circular data"};
  app.set_version_flag("--version", std::string("torograph ") + torograph::kVersion);
  app.require_subcommand(1);
  app.add_flag("--error-json", config.error_json,
               "emit a machine-readable error document on stdout");

  auto* fit_wn = app.add_subcommand(
      "fit-wn", "wrapped-Normal fit with Holm-corrected edge selection");
  add_io_options(fit_wn, config);
  fit_wn->add_option("--alpha", config.alpha, "significance level")
      ->capture_default_str();
  fit_wn->add_option("--truncation", config.truncation, "winding radius r")
      ->capture_default_str();
  fit_wn->add_flag("--cov-scale", config.cov_scale,
                   "test covariance entries instead of partial correlations");
  add_seed(fit_wn, config, false);
  fit_wn->callback([&config] { config.command = Command::fit_wn; });

  auto* fit_isn = app.add_subcommand(
      "fit-isn", "inverse stereographic Gaussian fit with stability selection");
  auto* fit_isnpn = app.add_subcommand(
      "fit-isnpn", "inverse stereographic Nonparanormal fit with stability selection");
  for (auto* cmd : {fit_isn, fit_isnpn}) {
    add_io_options(cmd, config);
    cmd->add_option("--folds", config.folds, "cross-validation folds")
        ->capture_default_str();
    cmd->add_option("--repeats", config.repeats, "cross-validation repeats")
        ->capture_default_str();
    cmd->add_option("--threshold", config.threshold, "stability threshold")
        ->capture_default_str();
    cmd->add_option("--rho-grid", config.rho_grid,
                    "explicit penalty grid (default: scaled to the data)");
    cmd->add_option("--epsilon", config.epsilon, "singularity offset")
        ->capture_default_str();
    add_seed(cmd, config, true);
  }
  fit_isn->callback([&config] { config.command = Command::fit_isn; });
  fit_isnpn->callback([&config] { config.command = Command::fit_isnpn; });

  auto* fit_cvm = app.add_subcommand(
      "fit-cvm-dag", "conditional von Mises DAG fit with LRT edge selection");
  add_io_options(fit_cvm, config);
  fit_cvm->add_option("--alpha", config.alpha, "significance level")
      ->capture_default_str();
  fit_cvm
      ->add_option("--ordering", config.ordering,
                   "a-priori node ordering, 1-based column indices")
      ->delimiter(',');
  fit_cvm->add_flag("--holm", config.holm, "Holm-adjust the LRT p-values");
  fit_cvm->callback([&config] { config.command = Command::fit_cvm_dag; });

  auto* simulate = app.add_subcommand("simulate", "draw samples from a model");
  simulate->add_option("--model", config.model, "wn | isn | cvm-dag")->required();
  simulate->add_option("--p", config.sim_p, "dimension (default parameters)");
  simulate->add_option("--n", config.sim_n, "sample count")->required();
  simulate->add_option("--params", config.params_path, "model parameters JSON");
  add_io_options(simulate, config, /*needs_input=*/false);
  add_seed(simulate, config, true);
  simulate->callback([&config] { config.command = Command::simulate; });

  auto* ci = app.add_subcommand("ci-query",
                                "conditional-independence query on a graph or "
                                "an ISN covariance");
  ci->add_option("--graph", config.graph_path, "graph JSON (separation query)");
  ci->add_option("--sigma", config.sigma_path, "covariance CSV (ISN query)");
  ci->add_option("--A", config.set_a, "vertex set A, 1-based")
      ->delimiter(',')
      ->required();
  ci->add_option("--C", config.set_c, "vertex set C, 1-based")
      ->delimiter(',')
      ->required();
  ci->add_option("--S", config.set_s, "separating set S, 1-based")->delimiter(',');
  ci->add_option("--output", config.output, "optional output directory");
  ci->callback([&config] { config.command = Command::ci_query; });

  auto* summary = app.add_subcommand(
      "summary", "circular summaries and Ramachandran scatter export");
  add_io_options(summary, config);
  summary->add_option("--pairs", config.pairs,
                      "column pairs phi:psi,... (default: phi<k>/psi<k> names)");
  summary->callback([&config] { config.command = Command::summary; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return torograph::cli::kExitConfig;
  }
  return torograph::cli::run(config);
}
