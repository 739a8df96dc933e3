#include "torograph/cvm_dag.hpp"

#include <cmath>
#include <stdexcept>

#include "torograph/bessel.hpp"
#include "torograph/circular.hpp"
#include "torograph/optim.hpp"
#include "torograph/stats.hpp"

namespace torograph {

CvmDagModel::CvmDagModel(Dag dag, Eigen::VectorXd mu, Eigen::VectorXd kappa,
                         std::vector<std::vector<double>> lambda)
    : dag_(std::move(dag)),
      mu_(std::move(mu)),
      kappa_(std::move(kappa)),
      lambda_(std::move(lambda)) {
  const Eigen::Index p = dag_.p();
  if (mu_.size() != p || kappa_.size() != p ||
      static_cast<Eigen::Index>(lambda_.size()) != p) {
    throw std::invalid_argument("CvmDagModel: dimension mismatch");
  }
  if ((kappa_.array() < 0.0).any()) {
    throw std::invalid_argument("CvmDagModel: kappa must be >= 0");
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (lambda_[j].size() != dag_.parents(static_cast<int>(j)).size()) {
      throw std::invalid_argument(
          "CvmDagModel: lambda[j] must align with the parent set of j");
    }
    mu_(j) = wrap_radians(mu_(j));
  }
}

VonMisesParams CvmDagModel::node_conditional(int j, const Eigen::VectorXd& theta) const {
  const auto& parents = dag_.parents(j);
  double b = 0.0;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    b += lambda_[j][k] * std::sin(theta(parents[k]) - mu_(parents[k]));
  }
  const double kappa_cond = std::hypot(kappa_(j), b);
  if (kappa_cond == 0.0) return VonMisesParams(Angle(mu_(j)), 0.0);
  return VonMisesParams(Angle(mu_(j) + std::atan2(b, kappa_(j))), kappa_cond);
}

double cvm_log_likelihood(const AngleMatrix& data, const CvmDagModel& model) {
  if (data.p() != model.p()) {
    throw std::invalid_argument("cvm_log_likelihood: dimension mismatch");
  }
  double total = 0.0;
  for (Eigen::Index r = 0; r < data.n(); ++r) {
    const Eigen::VectorXd row = data.row(r);
    for (int j = 0; j < model.p(); ++j) {
      total += vm_log_density(Angle(row(j)), model.node_conditional(j, row));
    }
  }
  return total;
}

CvmNodeObjective::CvmNodeObjective(const AngleMatrix& data, int j,
                                   std::vector<int> parents, double mu_j)
    : theta_j_(data.column(j)), parents_(std::move(parents)), mu_j_(mu_j) {
  parent_sines_.resize(data.n(), static_cast<Eigen::Index>(parents_.size()));
  for (std::size_t k = 0; k < parents_.size(); ++k) {
    const Eigen::VectorXd col = data.column(parents_[k]);
    const double mu_i = circular_mean(col).radians();
    parent_sines_.col(static_cast<Eigen::Index>(k)) = (col.array() - mu_i).sin();
  }
}

double CvmNodeObjective::operator()(const Eigen::VectorXd& t,
                                    Eigen::VectorXd& grad) const {
  const Eigen::Index q = static_cast<Eigen::Index>(parents_.size());
  const double kappa = std::exp(t(0));
  const Eigen::VectorXd lambda = t.tail(q);
  grad.setZero(1 + q);
  double nll = 0.0;
  const Eigen::Index n = theta_j_.size();
  for (Eigen::Index r = 0; r < n; ++r) {
    const double b = q > 0 ? parent_sines_.row(r).dot(lambda) : 0.0;
    const double kc = std::hypot(kappa, b);
    const double mu_cond = mu_j_ + std::atan2(b, kappa);
    const double d = theta_j_(r) - mu_cond;
    const double cd = std::cos(d), sd = std::sin(d);
    nll -= kc * cd - std::log(kTwoPi) - log_bessel_i0(kc);

    // d(-ll)/dx = -(cos d - A1(kc)) dkc/dx - kc sin d dphi/dx,
    // with kc = sqrt(kappa^2 + b^2), phi = atan2(b, kappa).
    const double cfac = cd - bessel_a1(kc);
    if (kc > 1e-300) {
      const double dk_dkappa = kappa / kc;
      const double dphi_dkappa = -b / (kc * kc);
      grad(0) -= (cfac * dk_dkappa + kc * sd * dphi_dkappa) * kappa;  // chain: log-kappa
      if (q > 0) {
        const double dk_db = b / kc;
        const double dphi_db = kappa / (kc * kc);
        const double coeff = cfac * dk_db + kc * sd * dphi_db;
        grad.tail(q) -= coeff * parent_sines_.row(r).transpose();
      }
    }
  }
  return nll;
}

CvmNodeFit cvm_fit_node(const AngleMatrix& data, int j, const std::vector<int>& parents,
                        const CvmFitOptions& options) {
  if (j < 0 || j >= data.p()) {
    throw std::invalid_argument("cvm_fit_node: node index out of range");
  }
  for (int i : parents) {
    if (i < 0 || i >= data.p() || i == j) {
      throw std::invalid_argument("cvm_fit_node: invalid parent index");
    }
  }
  if (data.n() <= static_cast<Eigen::Index>(parents.size()) + 2) {
    throw std::invalid_argument("cvm_fit_node: need n > |parents| + 2");
  }

  const double mu_j = circular_mean(data.column(j)).radians();
  CvmNodeObjective objective(data, j, parents, mu_j);

  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(objective.dimension());
  // Warm start kappa from the univariate concentration A1(kappa) ~ rbar.
  const double rbar = mean_resultant_length(data.column(j));
  t0(0) = std::log(std::clamp(rbar < 0.9999 ? (2.0 * rbar - rbar * rbar * rbar) /
                                                  (1.0 - rbar * rbar)
                                            : 1e4,
                              1e-3, 1e4));

  LbfgsOptions opts;
  opts.max_iterations = options.max_iterations;
  opts.gradient_tol = options.gradient_tol;
  const LbfgsResult res = lbfgs_minimize(
      [&](const Eigen::VectorXd& t, Eigen::VectorXd& g) { return objective(t, g); },
      t0, opts);

  CvmNodeFit fit;
  fit.mu = mu_j;
  fit.kappa = std::exp(res.x(0));
  fit.lambda.assign(res.x.data() + 1, res.x.data() + res.x.size());
  fit.log_likelihood = -res.value;
  fit.iterations = res.iterations;
  if (!res.converged) {
    throw cvm_convergence_error("cvm_fit_node: iteration cap reached for node " +
                                    std::to_string(j + 1),
                                fit);
  }
  return fit;
}

namespace {

std::vector<std::vector<int>> default_candidates(const std::vector<int>& ordering) {
  const int p = static_cast<int>(ordering.size());
  std::vector<std::vector<int>> candidates(p);
  std::vector<int> predecessors;
  for (int rank = 0; rank < p; ++rank) {
    candidates[ordering[rank]] = predecessors;
    predecessors.push_back(ordering[rank]);
  }
  return candidates;
}

}  // namespace

CvmSelectResult cvm_lrt_select(const AngleMatrix& data, const std::vector<int>& ordering,
                               double alpha, const CvmSelectOptions& options) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("cvm_lrt_select: alpha must lie in [0, 1)");
  }
  const int p = static_cast<int>(data.p());
  if (static_cast<int>(ordering.size()) != p) {
    throw std::invalid_argument("cvm_lrt_select: ordering size mismatch");
  }
  // Validate the ordering via a throwaway full DAG.
  std::vector<std::vector<int>> candidates = options.candidate_parents.empty()
                                                 ? default_candidates(ordering)
                                                 : options.candidate_parents;
  Dag candidate_dag(ordering, candidates, data.column_names());

  EdgeReport report;
  for (int j = 0; j < p; ++j) {
    const auto& cand = candidates[j];
    if (cand.empty()) continue;
    const CvmNodeFit full = cvm_fit_node(data, j, cand, options.fit);
    for (std::size_t k = 0; k < cand.size(); ++k) {
      std::vector<int> reduced = cand;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(k));
      const CvmNodeFit red = cvm_fit_node(data, j, reduced, options.fit);
      const double stat =
          std::max(0.0, 2.0 * (full.log_likelihood - red.log_likelihood));
      EdgeRecord rec;
      rec.i = cand[k];
      rec.j = j;
      rec.statistic = stat;
      rec.p_value = chisq1_sf(stat);
      report.push_back(rec);
    }
  }

  // Optional Holm correction across all tested edges.
  std::vector<double> pvals;
  pvals.reserve(report.size());
  for (const auto& rec : report) pvals.push_back(*rec.p_value);
  const std::vector<double> adjusted =
      options.holm ? holm_adjust(pvals) : pvals;
  for (std::size_t e = 0; e < report.size(); ++e) {
    report[e].adjusted_p = adjusted[e];
    report[e].selected = adjusted[e] < alpha;
  }

  std::vector<std::vector<int>> selected_parents(p);
  for (const auto& rec : report) {
    if (rec.selected) selected_parents[rec.j].push_back(rec.i);
  }
  Dag dag(ordering, selected_parents, data.column_names());

  Eigen::VectorXd mu(p), kappa(p);
  std::vector<std::vector<double>> lambda(p);
  for (int j = 0; j < p; ++j) {
    const CvmNodeFit fit = cvm_fit_node(data, j, dag.parents(j), options.fit);
    mu(j) = fit.mu;
    kappa(j) = fit.kappa;
    lambda[j] = fit.lambda;
  }
  CvmDagModel model(dag, mu, kappa, lambda);

  // Attach fitted couplings as edge weights.
  for (auto& rec : report) {
    if (!rec.selected) continue;
    const auto& pa = dag.parents(rec.j);
    for (std::size_t k = 0; k < pa.size(); ++k) {
      if (pa[k] == rec.i) rec.weight = model.lambda(rec.j)[k];
    }
  }
  return {std::move(dag), std::move(report), std::move(model)};
}

AngleMatrix cvm_sample(const CvmDagModel& model, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("cvm_sample: n >= 1 required");
  Rng rng(seed);
  Eigen::MatrixXd values(n, model.p());
  for (int r = 0; r < n; ++r) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(model.p());
    for (int rank = 0; rank < model.p(); ++rank) {
      const int j = model.dag().ordering()[rank];
      row(j) = vm_sample(model.node_conditional(j, row), rng).radians();
    }
    values.row(r) = row;
  }
  return AngleMatrix(std::move(values), model.dag().labels());
}

}  // namespace torograph
