#pragma once

#include "torograph/angle.hpp"
#include "torograph/rng.hpp"

namespace torograph {

/// Mean direction and concentration of a univariate von Mises law.
struct VonMisesParams {
  Angle mu{};
  double kappa = 0.0;

  VonMisesParams() = default;
  VonMisesParams(Angle mean_direction, double concentration);
};

/// log f(theta) = kappa cos(theta - mu) - ln(2 pi) - ln I0(kappa).
double vm_log_density(Angle theta, const VonMisesParams& params);

/// One draw by the Best-Fisher wrapped-Cauchy envelope rejection sampler
/// (exact, no discretization). kappa = 0 falls back to the circular uniform.
Angle vm_sample(const VonMisesParams& params, Rng& rng);

}  // namespace torograph
