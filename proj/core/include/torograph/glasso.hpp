#pragma once

#include <Eigen/Core>

namespace torograph {

struct GlassoOptions {
  double tol = 1e-7;        // relative change of W off-diagonals per sweep
  int max_iterations = 400;  // outer sweeps
  double inner_tol = 1e-9;
  int max_inner = 1000;
};

/// Weighted graphical lasso by block coordinate descent (Friedman, Hastie,
/// Tibshirani 2008): maximizes
///   log det Omega - tr(S Omega) - rho * sum_{i != j} weights_ij |Omega_ij|
/// with an unpenalized diagonal. Zeros in the estimate are exact. Weights
/// must be symmetric and non-negative; the diagonal of `weights` is ignored.
Eigen::MatrixXd glasso(const Eigen::MatrixXd& S, double rho,
                       const Eigen::MatrixXd& weights,
                       const GlassoOptions& options = {});

/// Adaptive variant. With an empty `weights` (size 0) a pilot unit-weight
/// pass at the same rho sets weights_ij = 1 / |Omega_tilde_ij| (gamma = 1),
/// then the weighted problem is solved; explicit weights skip the pilot.
Eigen::MatrixXd adaptive_glasso(const Eigen::MatrixXd& S, double rho,
                                const Eigen::MatrixXd& weights = Eigen::MatrixXd(),
                                const GlassoOptions& options = {});

/// Largest violation of the stationarity conditions of the weighted
/// objective at Omega: |(Omega^-1 - S)_ij| vs rho w_ij on zeros, equality on
/// non-zeros, and (Omega^-1)_ii = S_ii on the diagonal.
double glasso_kkt_residual(const Eigen::MatrixXd& S, double rho,
                           const Eigen::MatrixXd& weights,
                           const Eigen::MatrixXd& omega);

}  // namespace torograph
