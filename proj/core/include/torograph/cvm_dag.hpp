#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "torograph/angle_matrix.hpp"
#include "torograph/errors.hpp"
#include "torograph/graph.hpp"
#include "torograph/von_mises.hpp"

namespace torograph {

/// Conditional von Mises DAG model: each node's conditional given its
/// parents is von Mises with coupling coefficients lambda_ij carried only
/// for i in pa(j) (absent edge <=> lambda_ij = 0).
class CvmDagModel {
 public:
  /// lambda[j] is aligned with dag.parents(j).
  CvmDagModel(Dag dag, Eigen::VectorXd mu, Eigen::VectorXd kappa,
              std::vector<std::vector<double>> lambda);

  Eigen::Index p() const { return mu_.size(); }
  const Dag& dag() const { return dag_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& kappa() const { return kappa_; }
  const std::vector<double>& lambda(int j) const { return lambda_[j]; }

  /// Conditional law of node j given the parent coordinates of `theta`
  /// (other entries are ignored).
  VonMisesParams node_conditional(int j, const Eigen::VectorXd& theta) const;

 private:
  Dag dag_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd kappa_;
  std::vector<std::vector<double>> lambda_;
};

/// Sum over rows and nodes of the conditional von Mises log-density.
double cvm_log_likelihood(const AngleMatrix& data, const CvmDagModel& model);

/// Negative conditional log-likelihood of one node and its analytic
/// gradient, in the optimizer coordinates t = (log kappa_j, lambda_.j).
/// Exposed so gradients can be checked against finite differences.
class CvmNodeObjective {
 public:
  CvmNodeObjective(const AngleMatrix& data, int j, std::vector<int> parents,
                   double mu_j);

  Eigen::Index dimension() const { return 1 + static_cast<Eigen::Index>(parents_.size()); }
  double operator()(const Eigen::VectorXd& t, Eigen::VectorXd& grad) const;

 private:
  Eigen::VectorXd theta_j_;       // column j
  Eigen::MatrixXd parent_sines_;  // sin(theta_i - mu_hat_i) per parent
  std::vector<int> parents_;
  double mu_j_;
};

struct CvmFitOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;
};

struct CvmNodeFit {
  double mu = 0.0;
  double kappa = 0.0;
  std::vector<double> lambda;  // aligned with the parent set
  double log_likelihood = 0.0;
  int iterations = 0;
};

/// Thrown when a node fit hits the iteration cap; carries the best iterate.
class cvm_convergence_error : public convergence_error {
 public:
  cvm_convergence_error(const std::string& what, CvmNodeFit best)
      : convergence_error(what, best.iterations, -best.log_likelihood),
        best_(std::move(best)) {}
  const CvmNodeFit& best() const { return best_; }

 private:
  CvmNodeFit best_;
};

/// Profile fit of one node: mu_j is the circular mean of column j; kappa_j
/// (log-parameterized, hence >= 0) and the coupling coefficients maximize
/// the conditional log-likelihood by quasi-Newton ascent.
/// Requires n > |parents| + 2.
CvmNodeFit cvm_fit_node(const AngleMatrix& data, int j, const std::vector<int>& parents,
                        const CvmFitOptions& options = {});

struct CvmSelectOptions {
  /// Candidate parents per node; empty means all predecessors in the ordering.
  std::vector<std::vector<int>> candidate_parents;
  /// Holm-adjust the per-edge LRT p-values before thresholding (off by
  /// default: plain per-test selection).
  bool holm = false;
  CvmFitOptions fit;
};

struct CvmSelectResult {
  Dag dag;
  EdgeReport report;
  CvmDagModel model;  // refit on the retained parent sets
};

/// Per-edge likelihood-ratio selection: for each node j and candidate
/// parent i, 2 (l_full - l_reduced) is referred to chi-square(1); edges
/// with p-value < alpha are retained and the retained model is refit.
CvmSelectResult cvm_lrt_select(const AngleMatrix& data, const std::vector<int>& ordering,
                               double alpha, const CvmSelectOptions& options = {});

/// Ancestral sampling in the DAG ordering; deterministic for a fixed seed.
AngleMatrix cvm_sample(const CvmDagModel& model, int n, std::uint64_t seed);

}  // namespace torograph
