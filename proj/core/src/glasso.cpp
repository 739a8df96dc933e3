#include "torograph/glasso.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "torograph/errors.hpp"

namespace torograph {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

void check_inputs(const Eigen::MatrixXd& S, double rho, const Eigen::MatrixXd& weights) {
  const Eigen::Index p = S.rows();
  if (p < 1 || S.cols() != p) throw std::invalid_argument("glasso: S must be square");
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("glasso: S must be symmetric");
  }
  if (rho < 0.0) throw std::invalid_argument("glasso: rho must be >= 0");
  if (weights.rows() != p || weights.cols() != p) {
    throw std::invalid_argument("glasso: weights dimension mismatch");
  }
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("glasso: weights must be non-negative");
  }
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, weights.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("glasso: weights must be symmetric");
  }
}

}  // namespace

Eigen::MatrixXd glasso(const Eigen::MatrixXd& S, double rho,
                       const Eigen::MatrixXd& weights, const GlassoOptions& options) {
  check_inputs(S, rho, weights);
  const Eigen::Index p = S.rows();

  if (p == 1) {
    Eigen::MatrixXd omega(1, 1);
    omega(0, 0) = 1.0 / S(0, 0);
    return omega;
  }

  Eigen::MatrixXd W = S;  // working covariance estimate, diagonal fixed at S_ii
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(p, p);  // column regression coefficients

  const double off_scale = [&] {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (i != j) acc += std::abs(S(i, j));
      }
    }
    return std::max(acc / static_cast<double>(p * (p - 1)), 1e-12);
  }();

  std::vector<Eigen::Index> rest(p - 1);
  bool converged = false;
  int sweep = 0;
  for (; sweep < options.max_iterations; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index col = 0; col < p; ++col) {
      Eigen::Index idx = 0;
      for (Eigen::Index v = 0; v < p; ++v) {
        if (v != col) rest[idx++] = v;
      }
      // Lasso subproblem: 0.5 b' W11 b - b' s12 + sum_i rho w_i |b_i|.
      Eigen::VectorXd beta(p - 1);
      for (Eigen::Index k = 0; k < p - 1; ++k) beta(k) = B(rest[k], col);
      for (int inner = 0; inner < options.max_inner; ++inner) {
        double inner_change = 0.0;
        for (Eigen::Index k = 0; k < p - 1; ++k) {
          const Eigen::Index i = rest[k];
          double partial = S(i, col);
          for (Eigen::Index l = 0; l < p - 1; ++l) {
            if (l != k) partial -= W(i, rest[l]) * beta(l);
          }
          const double updated =
              soft_threshold(partial, rho * weights(i, col)) / W(i, i);
          inner_change = std::max(inner_change, std::abs(updated - beta(k)));
          beta(k) = updated;
        }
        if (inner_change <= options.inner_tol * std::max(1.0, beta.cwiseAbs().maxCoeff())) {
          break;
        }
      }
      for (Eigen::Index k = 0; k < p - 1; ++k) {
        double w_new = 0.0;
        for (Eigen::Index l = 0; l < p - 1; ++l) {
          w_new += W(rest[k], rest[l]) * beta(l);
        }
        max_change = std::max(max_change, std::abs(w_new - W(rest[k], col)));
        W(rest[k], col) = w_new;
        W(col, rest[k]) = w_new;
        B(rest[k], col) = beta(k);
      }
    }
    if (max_change <= options.tol * off_scale) {
      converged = true;
      ++sweep;
      break;
    }
  }
  if (!converged) {
    throw convergence_error("glasso: coordinate descent hit the sweep cap", sweep,
                            glasso_kkt_residual(S, rho, weights, W.inverse()));
  }

  // Recover Omega from the final (W, B).
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index col = 0; col < p; ++col) {
    double quad = 0.0;
    for (Eigen::Index v = 0; v < p; ++v) {
      if (v != col) quad += W(v, col) * B(v, col);
    }
    const double diag = 1.0 / (W(col, col) - quad);
    omega(col, col) = diag;
    for (Eigen::Index v = 0; v < p; ++v) {
      if (v != col && B(v, col) != 0.0) omega(v, col) = -B(v, col) * diag;
    }
  }
  // Exact zeros survive the symmetrization: the average of 0 and 0 is 0.
  return 0.5 * (omega + omega.transpose());
}

Eigen::MatrixXd adaptive_glasso(const Eigen::MatrixXd& S, double rho,
                                const Eigen::MatrixXd& weights,
                                const GlassoOptions& options) {
  if (weights.size() != 0) return glasso(S, rho, weights, options);
  const Eigen::Index p = S.rows();
  const Eigen::MatrixXd unit =
      Eigen::MatrixXd::Ones(p, p) - Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd pilot = glasso(S, rho, unit, options);
  Eigen::MatrixXd adaptive = Eigen::MatrixXd::Zero(p, p);
  constexpr double kWeightCap = 1e8;  // entries the pilot zeroed stay out
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i == j) continue;
      const double denom = std::abs(pilot(i, j));
      adaptive(i, j) = denom > 1.0 / kWeightCap ? 1.0 / denom : kWeightCap;
    }
  }
  return glasso(S, rho, adaptive, options);
}

double glasso_kkt_residual(const Eigen::MatrixXd& S, double rho,
                           const Eigen::MatrixXd& weights,
                           const Eigen::MatrixXd& omega) {
  const Eigen::Index p = S.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("glasso_kkt_residual: omega not positive definite");
  }
  const Eigen::MatrixXd W = llt.solve(Eigen::MatrixXd::Identity(p, p));
  double resid = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double grad = W(i, j) - S(i, j);
      if (i == j) {
        resid = std::max(resid, std::abs(grad));
      } else if (omega(i, j) != 0.0) {
        resid = std::max(resid,
                         std::abs(grad - rho * weights(i, j) *
                                             (omega(i, j) > 0.0 ? 1.0 : -1.0)));
      } else {
        resid = std::max(resid, std::max(0.0, std::abs(grad) - rho * weights(i, j)));
      }
    }
  }
  return resid;
}

}  // namespace torograph
