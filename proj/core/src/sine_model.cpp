#include "torograph/sine_model.hpp"

#include <cmath>
#include <stdexcept>

namespace torograph {

SineModelParams::SineModelParams(Eigen::VectorXd mu, Eigen::VectorXd kappa,
                                 Eigen::MatrixXd lambda)
    : mu_(std::move(mu)), kappa_(std::move(kappa)), lambda_(std::move(lambda)) {
  const Eigen::Index p = mu_.size();
  if (p < 1) throw std::invalid_argument("SineModelParams: p >= 1 required");
  if (kappa_.size() != p || lambda_.rows() != p || lambda_.cols() != p) {
    throw std::invalid_argument("SineModelParams: dimension mismatch");
  }
  if ((kappa_.array() < 0.0).any()) {
    throw std::invalid_argument("SineModelParams: kappa must be >= 0");
  }
  if (!lambda_.isApprox(lambda_.transpose(), 1e-12)) {
    throw std::invalid_argument("SineModelParams: lambda must be symmetric");
  }
  if (lambda_.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument("SineModelParams: lambda diagonal must be zero");
  }
  for (Eigen::Index i = 0; i < p; ++i) mu_(i) = wrap_radians(mu_(i));
}

double sine_log_density_unnormalized(const Eigen::VectorXd& theta,
                                     const SineModelParams& params) {
  if (theta.size() != params.p()) {
    throw std::invalid_argument("sine_log_density_unnormalized: dimension mismatch");
  }
  const Eigen::ArrayXd centered = theta.array() - params.mu().array();
  const Eigen::VectorXd c = centered.cos();
  const Eigen::VectorXd s = centered.sin();
  return params.kappa().dot(c) + 0.5 * s.dot(params.lambda() * s);
}

VonMisesParams sine_full_conditional(Eigen::Index j, const Eigen::VectorXd& theta,
                                     const SineModelParams& params) {
  const Eigen::Index p = params.p();
  if (p < 2) throw std::invalid_argument("sine_full_conditional: p >= 2 required");
  if (j < 0 || j >= p) {
    throw std::invalid_argument("sine_full_conditional: index out of range");
  }
  if (theta.size() != p) {
    throw std::invalid_argument("sine_full_conditional: dimension mismatch");
  }
  double b = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    if (i == j) continue;
    b += params.lambda()(i, j) * std::sin(theta(i) - params.mu()(i));
  }
  const double kappa_j = params.kappa()(j);
  const double kappa_cond = std::hypot(kappa_j, b);
  if (kappa_cond == 0.0) {
    return VonMisesParams(Angle(params.mu()(j)), 0.0);
  }
  const double mu_cond = params.mu()(j) + std::atan2(b, kappa_j);
  return VonMisesParams(Angle(mu_cond), kappa_cond);
}

double sine_log_normalizing_constant(const SineModelParams& params, int grid_points) {
  const Eigen::Index p = params.p();
  if (p > 3) {
    throw std::invalid_argument(
        "sine_log_normalizing_constant: quadrature value available for p <= 3 only");
  }
  if (grid_points < 8) {
    throw std::invalid_argument("sine_log_normalizing_constant: grid too coarse");
  }
  const double h = kTwoPi / grid_points;
  auto node = [&](int idx) { return -kPi + (idx + 0.5) * h; };

  double sum = 0.0;
  Eigen::VectorXd theta(p);
  if (p == 1) {
    for (int a = 0; a < grid_points; ++a) {
      theta(0) = node(a);
      sum += std::exp(sine_log_density_unnormalized(theta, params));
    }
    return std::log(sum * h);
  }
  if (p == 2) {
    for (int a = 0; a < grid_points; ++a) {
      theta(0) = node(a);
      for (int b = 0; b < grid_points; ++b) {
        theta(1) = node(b);
        sum += std::exp(sine_log_density_unnormalized(theta, params));
      }
    }
    return std::log(sum * h * h);
  }
  for (int a = 0; a < grid_points; ++a) {
    theta(0) = node(a);
    for (int b = 0; b < grid_points; ++b) {
      theta(1) = node(b);
      for (int c = 0; c < grid_points; ++c) {
        theta(2) = node(c);
        sum += std::exp(sine_log_density_unnormalized(theta, params));
      }
    }
  }
  return std::log(sum * h * h * h);
}

}  // namespace torograph
