#include "torograph/inverse_stereographic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "torograph/errors.hpp"
#include "torograph/rng.hpp"

namespace torograph {

namespace {

void check_sets(const Eigen::Index p, const std::vector<int>& a,
                const std::vector<int>& b, const char* context) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument(std::string(context) + ": sets must be non-empty");
  }
  std::vector<int> tags(p, 0);
  for (int v : a) {
    if (v < 0 || v >= p) throw std::invalid_argument(std::string(context) + ": index out of range");
    if (tags[v]++) throw std::invalid_argument(std::string(context) + ": duplicate index");
  }
  for (int v : b) {
    if (v < 0 || v >= p) throw std::invalid_argument(std::string(context) + ": index out of range");
    if (tags[v]++) throw std::invalid_argument(std::string(context) + ": sets must be disjoint");
  }
}

Eigen::VectorXd subset(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out(k) = v(idx[k]);
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  }
  return out;
}

}  // namespace

IsnParams::IsnParams(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double epsilon)
    : mu_(std::move(mu)), sigma_(std::move(sigma)), epsilon_(epsilon) {
  const Eigen::Index p = mu_.size();
  if (p < 1) throw std::invalid_argument("IsnParams: p >= 1 required");
  if (sigma_.rows() != p || sigma_.cols() != p) {
    throw std::invalid_argument("IsnParams: sigma dimension mismatch");
  }
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("IsnParams: sigma must be symmetric");
  }
  sigma_ = 0.5 * (sigma_ + sigma_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("IsnParams: sigma must be positive definite");
  }
  if (!(epsilon_ > 0.0 && epsilon_ <= 1e-3)) {
    throw std::invalid_argument("IsnParams: epsilon must lie in (0, 1e-3]");
  }
}

double stereographic_with_convention(double theta, double epsilon) {
  if (theta == kPi) theta = -kPi + epsilon;
  return std::tan(0.5 * theta);
}

double isn_log_density(const Eigen::VectorXd& theta, const IsnParams& params) {
  const Eigen::Index p = params.p();
  if (theta.size() != p) {
    throw std::invalid_argument("isn_log_density: dimension mismatch");
  }
  Eigen::VectorXd u(p);
  double log_jacobian = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double t = theta(j) == kPi ? -kPi + params.epsilon() : theta(j);
    u(j) = std::tan(0.5 * t);
    // 1 + cos t = 2 cos^2(t/2); the half-angle form stays representable
    // right up to the singularity.
    log_jacobian -= std::log(2.0) + 2.0 * std::log(std::abs(std::cos(0.5 * t)));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(params.sigma());
  if (llt.info() != Eigen::Success) {
    throw numerical_error("isn_log_density: Cholesky factorization failed");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const Eigen::VectorXd y = llt.matrixL().solve(u - params.mu());
  return -0.5 * (p * std::log(kTwoPi) + log_det) - 0.5 * y.squaredNorm() +
         log_jacobian;
}

IsnParams isn_fit(const AngleMatrix& data, double epsilon) {
  if (data.n() <= data.p()) {
    throw std::invalid_argument("isn_fit: need n > p");
  }
  const Eigen::Index n = data.n(), p = data.p();
  Eigen::MatrixXd u(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i, j) = stereographic_with_convention(data(i, j), epsilon);
    }
  }
  const Eigen::VectorXd mean = u.colwise().mean();
  Eigen::MatrixXd centered = u.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff())) {
    throw numerical_error("isn_fit: degenerate sample covariance (rank < p)");
  }
  return IsnParams(mean, cov, epsilon);
}

IsnParams isn_conditional(const IsnParams& params, const std::vector<int>& A,
                          const std::vector<int>& B, const Eigen::VectorXd& theta_B) {
  check_sets(params.p(), A, B, "isn_conditional");
  if (theta_B.size() != static_cast<Eigen::Index>(B.size())) {
    throw std::invalid_argument("isn_conditional: theta_B size mismatch");
  }
  Eigen::VectorXd u_B(theta_B.size());
  for (Eigen::Index k = 0; k < theta_B.size(); ++k) {
    u_B(k) = stereographic_with_convention(theta_B(k), params.epsilon());
  }
  const Eigen::MatrixXd sigma_AB = submatrix(params.sigma(), A, B);
  const Eigen::MatrixXd sigma_BB = submatrix(params.sigma(), B, B);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_BB);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("isn_conditional: sigma_BB numerically singular");
  }
  // Regression term with a plus sign, as for the wrapped-Normal conditional:
  // the torus quadrature ratio fixes the orientation.
  const Eigen::VectorXd mean =
      subset(params.mu(), A) + sigma_AB * llt.solve(u_B - subset(params.mu(), B));
  const Eigen::MatrixXd cov =
      submatrix(params.sigma(), A, A) - sigma_AB * llt.solve(sigma_AB.transpose());
  return IsnParams(mean, cov, params.epsilon());
}

bool isn_ci_query(const Eigen::MatrixXd& sigma, const std::vector<int>& A,
                  const std::vector<int>& C, const std::vector<int>& S, double tol) {
  const Eigen::Index p = sigma.rows();
  check_sets(p, A, C, "isn_ci_query");
  if (!S.empty()) {
    check_sets(p, A, S, "isn_ci_query");
    check_sets(p, C, S, "isn_ci_query");
  }
  std::vector<int> acs;
  acs.insert(acs.end(), A.begin(), A.end());
  acs.insert(acs.end(), C.begin(), C.end());
  acs.insert(acs.end(), S.begin(), S.end());
  const Eigen::MatrixXd block = submatrix(sigma, acs, acs);
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("isn_ci_query: principal submatrix singular");
  }
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(block.rows(), block.cols()));
  for (std::size_t a = 0; a < A.size(); ++a) {
    for (std::size_t c = 0; c < C.size(); ++c) {
      if (std::abs(inv(a, A.size() + c)) > tol) return false;
    }
  }
  return true;
}

AngleMatrix isn_sample(const IsnParams& params, int n, std::uint64_t seed,
                       std::vector<std::string> column_names) {
  if (n < 1) throw std::invalid_argument("isn_sample: n >= 1 required");
  const Eigen::Index p = params.p();
  Eigen::LLT<Eigen::MatrixXd> llt(params.sigma());
  if (llt.info() != Eigen::Success) {
    throw numerical_error("isn_sample: Cholesky factorization failed");
  }
  Rng rng(seed);
  Eigen::MatrixXd values(n, p);
  for (int r = 0; r < n; ++r) {
    const Eigen::VectorXd x =
        params.mu() + Eigen::MatrixXd(llt.matrixL()) * rng.normal_vector(p);
    for (Eigen::Index j = 0; j < p; ++j) values(r, j) = 2.0 * std::atan(x(j));
  }
  return column_names.empty() ? AngleMatrix::from_raw(std::move(values))
                              : AngleMatrix(std::move(values), std::move(column_names));
}

}  // namespace torograph
