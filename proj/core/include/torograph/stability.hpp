#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "torograph/angle_matrix.hpp"
#include "torograph/glasso.hpp"
#include "torograph/graph.hpp"

namespace torograph {

enum class IsnModelKind { isn, isnpn };

struct StabilityOptions {
  int folds = 5;
  int repeats = 50;
  double threshold = 0.5;
  Eigen::VectorXd rho_grid;  // empty: default grid scaled by max |S_offdiag|
  std::uint64_t seed = 0;
  double epsilon = 1e-9;
  GlassoOptions glasso;
};

struct StabilityReport {
  Eigen::MatrixXd frequency;       // symmetric edge selection frequencies
  std::vector<double> chosen_rho;  // per successful repeat
  Eigen::VectorXd rho_grid;
  double threshold = 0.5;
  int folds = 5;
  int repeats = 50;
  int failed_repeats = 0;
};

struct StabilityResult {
  UndirectedGraph graph;
  StabilityReport report;
  EdgeReport edge_report;
  Eigen::MatrixXd precision;  // adaptive-lasso fit at the last repeat's rho on full data
};

/// Default penalty grid: 20 log-spaced values on [0.01, 1] * max |S_offdiag|.
Eigen::VectorXd default_rho_grid(const Eigen::MatrixXd& S);

/// Repeated k-fold cross-validated adaptive graphical lasso with edge
/// stability selection. Per repeat: shuffle, pick the rho maximizing the
/// mean held-out Gaussian log-likelihood on the transformed scale (ties
/// break toward the larger, sparser rho), fit on the full data, record the
/// edge set. Edges present in at least `threshold` of the successful
/// repeats form the graph. Deterministic for a fixed seed, under any
/// thread count. Requires n >= 2 * folds.
StabilityResult stability_select(const AngleMatrix& data, IsnModelKind kind,
                                 const StabilityOptions& options);

}  // namespace torograph
