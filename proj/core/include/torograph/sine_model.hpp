#pragma once

#include <Eigen/Core>

#include "torograph/angle_matrix.hpp"
#include "torograph/von_mises.hpp"

namespace torograph {

/// Parameters of the multivariate sine distribution: mean directions mu,
/// concentrations kappa >= 0, and the symmetric zero-diagonal interaction
/// matrix lambda of pairwise sine-sine couplings. The normalizing constant
/// has no closed form for p > 2 and is not part of the state; see
/// sine_log_normalizing_constant for a quadrature value at p <= 3.
class SineModelParams {
 public:
  SineModelParams(Eigen::VectorXd mu, Eigen::VectorXd kappa, Eigen::MatrixXd lambda);

  Eigen::Index p() const { return mu_.size(); }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& kappa() const { return kappa_; }
  const Eigen::MatrixXd& lambda() const { return lambda_; }

 private:
  Eigen::VectorXd mu_;      // wrapped componentwise
  Eigen::VectorXd kappa_;   // componentwise >= 0
  Eigen::MatrixXd lambda_;  // symmetric, zero diagonal
};

/// Exponent of the sine density: kappa' c(theta, mu) + s' Lambda s / 2,
/// with c_i = cos(theta_i - mu_i) and s_i = sin(theta_i - mu_i).
double sine_log_density_unnormalized(const Eigen::VectorXd& theta,
                                     const SineModelParams& params);

/// Univariate full conditional of coordinate j given the rest. Entry j of
/// `theta` is ignored. With b_j = sum_{i != j} lambda_ij sin(theta_i - mu_i):
/// concentration sqrt(kappa_j^2 + b_j^2) and mean direction
/// mu_j + atan2(b_j, kappa_j), the form the normalized joint-density slice
/// reproduces. kappa_j = b_j = 0 degenerates to the circular uniform.
VonMisesParams sine_full_conditional(Eigen::Index j, const Eigen::VectorXd& theta,
                                     const SineModelParams& params);

/// log C(kappa, lambda) by tensor-product quadrature, p <= 3 only.
double sine_log_normalizing_constant(const SineModelParams& params,
                                     int grid_points = 256);

}  // namespace torograph
