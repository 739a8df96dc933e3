#pragma once

// Torus quadrature helpers shared by the unit and acceptance suites.
// Midpoint rules on periodic integrands converge spectrally and never touch
// the +/-pi endpoint, which keeps the stereographic singularity out of the
// node set.

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace testsupport {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double node(int idx, int n) { return -kPi + (idx + 0.5) * kTwoPi / n; }

inline double integrate_t1(const std::function<double(double)>& f, int n = 2048) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(node(i, n));
  return sum * kTwoPi / n;
}

inline double integrate_t2(const std::function<double(double, double)>& f,
                           int n = 256) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = node(i, n);
    for (int j = 0; j < n; ++j) sum += f(a, node(j, n));
  }
  const double h = kTwoPi / n;
  return sum * h * h;
}

inline double integrate_t3(const std::function<double(double, double, double)>& f,
                           int n = 64) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = node(i, n);
    for (int j = 0; j < n; ++j) {
      const double b = node(j, n);
      for (int k = 0; k < n; ++k) sum += f(a, b, node(k, n));
    }
  }
  const double h = kTwoPi / n;
  return sum * h * h * h;
}

/// Evaluation grid of m midpoints over (-pi, pi).
inline std::vector<double> grid_t1(int m) {
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = node(i, m);
  return g;
}

}  // namespace testsupport
