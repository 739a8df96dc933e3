#pragma once

namespace torograph {

/// Modified Bessel function I0(kappa) for kappa >= 0. Power series below the
/// crossover, asymptotic expansion above; relative error <= 1e-12 on
/// [0, 700]. Overflows to +inf near kappa ~ 713; use log_bessel_i0 there.
double bessel_i0(double kappa);

/// log I0(kappa), finite for all kappa >= 0.
double log_bessel_i0(double kappa);

/// Modified Bessel function I1(kappa), kappa >= 0.
double bessel_i1(double kappa);

/// The ratio A1(kappa) = I1(kappa) / I0(kappa), the mean resultant length of
/// a von Mises distribution with concentration kappa.
double bessel_a1(double kappa);

}  // namespace torograph
