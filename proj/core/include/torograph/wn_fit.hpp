#pragma once

#include <Eigen/Core>

#include "torograph/angle_matrix.hpp"
#include "torograph/errors.hpp"
#include "torograph/graph.hpp"
#include "torograph/wrapped_normal.hpp"

namespace torograph {

/// Negative truncated wrapped-Normal log-likelihood with mu held fixed,
/// as a function of the log-Cholesky parameters of sigma, with analytic
/// gradient. Parameter layout: column-major lower triangle of L, diagonal
/// entries on the log scale.
class WnLogCholeskyObjective {
 public:
  WnLogCholeskyObjective(const AngleMatrix& data, Eigen::VectorXd mu,
                         WindingTruncation trunc);

  Eigen::Index dimension() const { return p_ * (p_ + 1) / 2; }
  double operator()(const Eigen::VectorXd& t, Eigen::VectorXd& grad) const;

  static Eigen::VectorXd pack(const Eigen::MatrixXd& sigma);
  static Eigen::MatrixXd unpack(const Eigen::VectorXd& t, Eigen::Index p);

 private:
  Eigen::MatrixXd centered_;  // theta - mu per row
  Eigen::MatrixXd offsets_;   // 2 pi k over the winding grid, one row per k
  Eigen::Index p_;
};

/// Remark-1 moment probe of sigma: -2 ln rbar_j on the diagonal and
/// ln(r_i r_j / r_ij) off it, eigenvalue-floored to a positive definite
/// completion. Falls back to the identity when a resultant vanishes.
Eigen::MatrixXd wn_moment_init(const AngleMatrix& data);

struct WnFitOptions {
  int max_iterations = 1000;
  double gradient_tol = 1e-7;
};

struct WnFitResult {
  WnParams params;
  double log_likelihood = 0.0;
  int iterations = 0;
};

class wn_convergence_error : public convergence_error {
 public:
  wn_convergence_error(const std::string& what, WnFitResult best)
      : convergence_error(what, best.iterations, -best.log_likelihood),
        best_(std::move(best)) {}
  const WnFitResult& best() const { return best_; }

 private:
  WnFitResult best_;
};

/// Approximate profile MLE: mu_hat fixed at the per-column circular means,
/// sigma_hat maximizing the winding-truncated log-likelihood over the
/// log-Cholesky parameterization, warm-started from the moment probe.
/// Requires n > p; throws wn_convergence_error (carrying the best iterate)
/// at the iteration cap.
WnFitResult wn_fit_approx_mle(const AngleMatrix& data, const WindingTruncation& trunc,
                              const WnFitOptions& options = {});

enum class WnEdgeScale {
  precision,   // partial correlations from sigma_hat^{-1} (default)
  covariance,  // direct tests of sigma_ij via observed information
};

struct WnEdgeSelectOptions {
  bool holm = true;
};

struct WnEdgeSelectResult {
  UndirectedGraph graph;
  EdgeReport report;
};

/// Edge selection for the unwrapped Normal graphical model on the precision
/// scale: Fisher-z tests of the partial correlations with effective sample
/// size n - p - 1, Holm-adjusted, edges kept at adjusted p < alpha.
WnEdgeSelectResult unwrapped_edge_select(const WnParams& fit, int n, double alpha,
                                         const WnEdgeSelectOptions& options = {});

/// Covariance-scale variant: Wald tests of sigma_ij = 0 with standard
/// errors from the observed information of the truncated likelihood
/// (numerical Hessian of the analytic gradient). Needs the data.
WnEdgeSelectResult unwrapped_edge_select_covariance(const WnParams& fit,
                                                    const AngleMatrix& data,
                                                    const WindingTruncation& trunc,
                                                    double alpha,
                                                    const WnEdgeSelectOptions& options = {});

}  // namespace torograph
