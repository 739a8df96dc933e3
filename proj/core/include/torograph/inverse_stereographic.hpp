#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "torograph/angle_matrix.hpp"

namespace torograph {

/// Parameters of the inverse stereographic Normal: Gaussian location and
/// scale on the projected u = tan(theta/2) axis, plus the epsilon of the
/// singularity convention (theta = pi evaluates as -pi + epsilon).
class IsnParams {
 public:
  IsnParams(Eigen::VectorXd mu, Eigen::MatrixXd sigma, double epsilon = 1e-9);

  Eigen::Index p() const { return mu_.size(); }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  double epsilon() const { return epsilon_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
  double epsilon_;
};

/// u = tan(theta/2) with the singularity convention applied at theta = pi.
double stereographic_with_convention(double theta, double epsilon);

/// Change-of-variables density of Theta = 2 atan(U), U ~ N(mu, sigma):
/// log N(u; mu, sigma) + sum_j log(1 / (1 + cos theta_j)).
double isn_log_density(const Eigen::VectorXd& theta, const IsnParams& params);

/// Gaussian MLE on the projected scale: sample mean and covariance
/// (divisor n) of u = tan(theta/2). Requires n > p and a non-degenerate
/// covariance.
IsnParams isn_fit(const AngleMatrix& data, double epsilon = 1e-9);

/// Closure under conditioning: Theta_A | Theta_B = theta_B is ISN with the
/// Gaussian conditional moments at u_B = tan(theta_B / 2).
IsnParams isn_conditional(const IsnParams& params, const std::vector<int>& A,
                          const std::vector<int>& B, const Eigen::VectorXd& theta_B);

/// Conditional-independence query: Theta_A indep Theta_C given Theta_S iff
/// the AC block of the inverse of the (A u C u S) principal submatrix of
/// sigma vanishes (tolerance on the inverse entries).
bool isn_ci_query(const Eigen::MatrixXd& sigma, const std::vector<int>& A,
                  const std::vector<int>& C, const std::vector<int>& S,
                  double tol = 1e-10);

/// Draws theta = 2 atan(x), x ~ N(mu, sigma); deterministic for fixed seed.
AngleMatrix isn_sample(const IsnParams& params, int n, std::uint64_t seed,
                       std::vector<std::string> column_names = {});

}  // namespace torograph
