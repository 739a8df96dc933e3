#pragma once

#include <Eigen/Core>
#include <vector>

#include "torograph/angle_matrix.hpp"
#include "torograph/inverse_stereographic.hpp"

namespace torograph {

/// Coordinatewise monotone transforms h_j estimated from the truncated
/// (Winsorized) empirical CDF of U_j composed with the Gaussian quantile,
/// affinely rescaled so each h_j preserves the sample mean and variance of
/// U_j (the identifiability constraint). Out-of-sample evaluation is by
/// monotone linear interpolation with flat extrapolation beyond the
/// training range; the derivative for density work is floored.
class NpnTransform {
 public:
  struct Coordinate {
    Eigen::VectorXd knots_u;  // sorted distinct reference values of U_j
    Eigen::VectorXd knots_h;  // transformed values, non-decreasing
    double target_mean = 0.0;
    double target_sd = 1.0;
  };

  NpnTransform(std::vector<Coordinate> coordinates, double delta,
               double derivative_floor = 1e-12);

  /// h_j = id, h_j' = 1 in every coordinate.
  static NpnTransform identity(Eigen::Index p);

  Eigen::Index p() const { return static_cast<Eigen::Index>(coords_.size()); }
  bool is_identity() const { return identity_; }
  double delta() const { return delta_; }
  double derivative_floor() const { return derivative_floor_; }
  const Coordinate& coordinate(Eigen::Index j) const { return coords_[j]; }

  double evaluate(Eigen::Index j, double u) const;
  /// Piecewise slope of the interpolant, floored away from zero.
  double derivative(Eigen::Index j, double u) const;

 private:
  std::vector<Coordinate> coords_;
  double delta_ = 0.0;
  double derivative_floor_;
  bool identity_ = false;
};

/// Winsorization level of Liu et al.: 1 / (4 n^{1/4} sqrt(pi ln n)).
double npn_truncation_level(Eigen::Index n);

/// Estimates the per-coordinate transforms from the projections
/// u = tan(theta/2) of the sample. Requires n >= 10; a constant column is a
/// degenerate-transform error.
NpnTransform npn_estimate_transforms(const AngleMatrix& data, double epsilon = 1e-9);

/// ISN parameters together with the nonparanormal transforms.
struct IsnpnModel {
  IsnParams params;
  NpnTransform transform;
};

/// Density of the inverse stereographic nonparanormal: Gaussian at h(u)
/// plus the Jacobians of both the projection and h.
double isnpn_log_density(const Eigen::VectorXd& theta, const IsnpnModel& model);

/// Sample covariance (divisor n) of the transformed projections h(u),
/// eigenvalue-floored to keep it usable as a graphical-lasso input.
Eigen::MatrixXd npn_correlation(const AngleMatrix& data, const NpnTransform& transform,
                                double epsilon = 1e-9);

}  // namespace torograph
