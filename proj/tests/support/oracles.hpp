#pragma once

// Independent oracles used to freeze expected values. Each one computes its
// result by a route the production code does not share: ascending power
// series, high-radius direct Gaussian sums, brute-force enumeration.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <vector>

#include "support/quadrature.hpp"

namespace testsupport {

/// I0 by its ascending series, summed to machine precision.
inline double bessel_i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 2000; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

/// I1 by its ascending series.
inline double bessel_i1_series(double x) {
  const double q = 0.25 * x * x;
  double term = 0.5 * x, sum = term;
  for (int m = 1; m < 2000; ++m) {
    term *= q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

/// Univariate Gaussian density.
inline double gauss_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(kTwoPi * var);
}

/// Wrapped Normal density on T^1 by direct summation over a wide winding
/// range (independent of the library's truncated evaluator).
inline double wn1_density_direct(double theta, double mean, double var,
                                 int radius = 50) {
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    sum += gauss_pdf(theta + kTwoPi * k, mean, var);
  }
  return sum;
}

/// Multivariate Gaussian density by Cholesky.
inline double gauss_pdf_nd(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const Eigen::VectorXd y = llt.matrixL().solve(x - mean);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  return std::exp(-0.5 * (sigma.rows() * std::log(kTwoPi) + log_det) -
                  0.5 * y.squaredNorm());
}

/// Wrapped Normal density on T^p by direct enumeration of {-r..r}^p.
inline double wnp_density_direct(const Eigen::VectorXd& theta,
                                 const Eigen::VectorXd& mean,
                                 const Eigen::MatrixXd& sigma, int radius) {
  const int p = static_cast<int>(theta.size());
  std::vector<int> k(p, -radius);
  double sum = 0.0;
  for (;;) {
    Eigen::VectorXd shifted = theta;
    for (int d = 0; d < p; ++d) shifted(d) += kTwoPi * k[d];
    sum += gauss_pdf_nd(shifted, mean, sigma);
    int d = 0;
    while (d < p) {
      if (k[d] < radius) {
        ++k[d];
        break;
      }
      k[d] = -radius;
      ++d;
    }
    if (d == p) break;
  }
  return sum;
}

/// Kuiper one-sample test against the circular uniform on (-pi, pi].
/// Returns the asymptotic p-value.
inline double kuiper_uniform_pvalue(std::vector<double> angles) {
  const std::size_t n = angles.size();
  std::sort(angles.begin(), angles.end());
  double d_plus = 0.0, d_minus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = (angles[i] + kPi) / kTwoPi;
    d_plus = std::max(d_plus, static_cast<double>(i + 1) / n - cdf);
    d_minus = std::max(d_minus, cdf - static_cast<double>(i) / n);
  }
  const double v = d_plus + d_minus;
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double lambda = (sqrt_n + 0.155 + 0.24 / sqrt_n) * v;
  double p = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double jj = static_cast<double>(j) * j * lambda * lambda;
    p += 2.0 * (4.0 * jj - 1.0) * std::exp(-2.0 * jj);
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace testsupport
