#pragma once

#include <Eigen/Core>
#include <vector>

#include "torograph/angle.hpp"
#include "torograph/angle_matrix.hpp"

namespace torograph {

/// Per-column circular location and dispersion summaries.
///
/// mardia_variance is -2 ln(rbar), the inversion of the wrapped-Normal
/// concentration identity ||E e^{i Theta_j}|| = exp(-sigma_jj / 2); it is
/// the default dispersion scale throughout. circular_variance = 1 - rbar is
/// carried alongside for reference.
struct CircularSummary {
  std::vector<Angle> mean_direction;
  Eigen::VectorXd mean_resultant_length;
  Eigen::VectorXd mardia_variance;
  Eigen::VectorXd circular_variance;
};

/// Direction of the resultant of unit vectors at the given angles.
/// Throws undefined_direction_error when the resultant length vanishes.
Angle circular_mean(const Eigen::VectorXd& angles);

/// Mean resultant length rbar in [0, 1].
double mean_resultant_length(const Eigen::VectorXd& angles);

/// Column-wise summary; requires n >= 2.
CircularSummary circular_summary(const AngleMatrix& data);

/// Empirical moduli of the first and mixed trigonometric moments of a
/// column pair, and the induced covariance probe
/// sigma_hat = ln(r_i * r_j / r_ij).
struct ComplexMoments {
  double r_i = 0.0;   // ||mean e^{i theta_i}||
  double r_j = 0.0;   // ||mean e^{i theta_j}||
  double r_ij = 0.0;  // ||mean e^{i (theta_i + theta_j)}||
  double sigma_probe() const;
};

ComplexMoments complex_moments(const AngleMatrix& data, Eigen::Index i,
                               Eigen::Index j);

/// Stereographic projection u = tan(theta / 2), a bijection between
/// (-pi, pi) and the real line. Throws singularity_error at theta = pi.
double stereographic(Angle theta);

/// Inverse projection theta = 2 atan(u).
Angle inverse_stereographic(double u);

}  // namespace torograph
