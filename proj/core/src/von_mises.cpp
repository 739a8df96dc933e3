#include "torograph/von_mises.hpp"

#include <cmath>
#include <stdexcept>

#include "torograph/bessel.hpp"

namespace torograph {

VonMisesParams::VonMisesParams(Angle mean_direction, double concentration)
    : mu(mean_direction), kappa(concentration) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("VonMisesParams: kappa must be finite and >= 0");
  }
}

double vm_log_density(Angle theta, const VonMisesParams& params) {
  return params.kappa * std::cos(theta.radians() - params.mu.radians()) -
         std::log(kTwoPi) - log_bessel_i0(params.kappa);
}

Angle vm_sample(const VonMisesParams& params, Rng& rng) {
  const double kappa = params.kappa;
  if (kappa < 1e-10) {
    return Angle(rng.uniform(-kPi, kPi));
  }
  // Best & Fisher (1979).
  const double a = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double b = (a - std::sqrt(2.0 * a)) / (2.0 * kappa);
  const double r = (1.0 + b * b) / (2.0 * b);
  for (;;) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double z = std::cos(kPi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 ||
        (u2 > 0.0 && std::log(c / u2) + 1.0 - c >= 0.0)) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return Angle(sign * std::acos(f) + params.mu.radians());
    }
  }
}

}  // namespace torograph
