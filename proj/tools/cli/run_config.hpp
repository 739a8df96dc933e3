#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace torograph::cli {

enum class Command {
  fit_wn,
  fit_isn,
  fit_isnpn,
  fit_cvm_dag,
  simulate,
  ci_query,
  summary,
};

enum class AngleUnit { radians, degrees };

/// One fully-resolved CLI invocation. Defaults follow the reference
/// analysis settings: truncation radius 1, 5 folds, 50 repeats, stability
/// threshold 0.5, alpha 0.05. Stochastic commands require an explicit seed.
struct RunConfig {
  Command command = Command::summary;
  std::string input;
  std::string output;
  AngleUnit unit = AngleUnit::radians;

  double alpha = 0.05;
  int truncation = 1;
  int folds = 5;
  int repeats = 50;
  double threshold = 0.5;
  std::vector<double> rho_grid;  // empty: derived from the data
  std::vector<int> ordering;     // 1-based, fit-cvm-dag only
  bool holm = false;             // Holm-adjust the CvM LRT p-values
  bool cov_scale = false;        // covariance-scale WN edge tests
  double epsilon = 1e-9;
  std::optional<std::uint64_t> seed;

  // simulate
  std::string model;  // "wn" | "cvm-dag" | "isn"
  int sim_p = 0;
  int sim_n = 0;
  std::string params_path;

  // ci-query
  std::string graph_path;
  std::string sigma_path;
  std::vector<int> set_a, set_c, set_s;  // 1-based

  // summary
  std::string pairs;  // "phi1:psi1,phi2:psi2"; empty: auto-detect phi*/psi*

  bool error_json = false;
};

/// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitNoConvergence = 5;

}  // namespace torograph::cli
