#include "torograph/nonparanormal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "torograph/errors.hpp"
#include "torograph/stats.hpp"

namespace torograph {

NpnTransform::NpnTransform(std::vector<Coordinate> coordinates, double delta,
                           double derivative_floor)
    : coords_(std::move(coordinates)), delta_(delta), derivative_floor_(derivative_floor) {
  for (const auto& c : coords_) {
    if (c.knots_u.size() != c.knots_h.size() || c.knots_u.size() < 2) {
      throw std::invalid_argument("NpnTransform: need at least two knots");
    }
    for (Eigen::Index k = 1; k < c.knots_u.size(); ++k) {
      if (!(c.knots_u(k) > c.knots_u(k - 1)) || c.knots_h(k) < c.knots_h(k - 1)) {
        throw std::invalid_argument("NpnTransform: knots must be monotone");
      }
    }
  }
}

NpnTransform NpnTransform::identity(Eigen::Index p) {
  NpnTransform t(std::vector<Coordinate>(), 0.0, 1e-12);
  t.coords_.resize(p);
  t.identity_ = true;
  return t;
}

double NpnTransform::evaluate(Eigen::Index j, double u) const {
  if (identity_) return u;
  const Coordinate& c = coords_.at(j);
  const Eigen::Index m = c.knots_u.size();
  if (u <= c.knots_u(0)) return c.knots_h(0);
  if (u >= c.knots_u(m - 1)) return c.knots_h(m - 1);
  const double* begin = c.knots_u.data();
  const Eigen::Index hi = std::upper_bound(begin, begin + m, u) - begin;
  const double u0 = c.knots_u(hi - 1), u1 = c.knots_u(hi);
  const double h0 = c.knots_h(hi - 1), h1 = c.knots_h(hi);
  return h0 + (h1 - h0) * (u - u0) / (u1 - u0);
}

double NpnTransform::derivative(Eigen::Index j, double u) const {
  if (identity_) return 1.0;
  const Coordinate& c = coords_.at(j);
  const Eigen::Index m = c.knots_u.size();
  double slope = 0.0;  // flat extrapolation outside the training range
  if (u > c.knots_u(0) && u < c.knots_u(m - 1)) {
    const double* begin = c.knots_u.data();
    const Eigen::Index hi = std::upper_bound(begin, begin + m, u) - begin;
    slope = (c.knots_h(hi) - c.knots_h(hi - 1)) / (c.knots_u(hi) - c.knots_u(hi - 1));
  }
  return std::max(slope, derivative_floor_);
}

double npn_truncation_level(Eigen::Index n) {
  const double nn = static_cast<double>(n);
  return 1.0 / (4.0 * std::pow(nn, 0.25) * std::sqrt(kPi * std::log(nn)));
}

NpnTransform npn_estimate_transforms(const AngleMatrix& data, double epsilon) {
  const Eigen::Index n = data.n(), p = data.p();
  if (n < 10) {
    throw std::invalid_argument("npn_estimate_transforms: need n >= 10");
  }
  const double delta = npn_truncation_level(n);
  std::vector<NpnTransform::Coordinate> coords(p);

  for (Eigen::Index j = 0; j < p; ++j) {
    std::vector<double> u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u[i] = stereographic_with_convention(data(i, j), epsilon);
    }
    std::vector<double> sorted = u;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back()) {
      throw numerical_error("npn_estimate_transforms: column '" +
                            data.column_names()[j] + "' is constant");
    }

    // Winsorized empirical CDF at the distinct sorted values, then the
    // Gaussian quantile.
    std::vector<double> knots_u, gauss;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i + 1 < n && sorted[i + 1] == sorted[i]) continue;  // keep last of ties
      const double cdf = static_cast<double>(i + 1) / static_cast<double>(n);
      knots_u.push_back(sorted[i]);
      gauss.push_back(normal_quantile(std::clamp(cdf, delta, 1.0 - delta)));
    }

    // Affine rescale so the transformed sample keeps the mean and variance
    // of U_j (identifiability).
    double mean_u = 0.0, mean_g = 0.0;
    std::vector<double> g_sample(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double* base = knots_u.data();
      const auto it = std::lower_bound(base, base + knots_u.size(), u[i]);
      g_sample[i] = gauss[static_cast<std::size_t>(it - base)];
      mean_u += u[i];
      mean_g += g_sample[i];
    }
    mean_u /= static_cast<double>(n);
    mean_g /= static_cast<double>(n);
    double var_u = 0.0, var_g = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      var_u += (u[i] - mean_u) * (u[i] - mean_u);
      var_g += (g_sample[i] - mean_g) * (g_sample[i] - mean_g);
    }
    var_u /= static_cast<double>(n);
    var_g /= static_cast<double>(n);
    if (var_g <= 0.0) {
      throw numerical_error("npn_estimate_transforms: degenerate transform for '" +
                            data.column_names()[j] + "'");
    }
    const double scale = std::sqrt(var_u / var_g);
    const double shift = mean_u - scale * mean_g;

    NpnTransform::Coordinate c;
    c.knots_u = Eigen::Map<Eigen::VectorXd>(knots_u.data(), knots_u.size());
    c.knots_h.resize(c.knots_u.size());
    for (Eigen::Index k = 0; k < c.knots_h.size(); ++k) {
      c.knots_h(k) = shift + scale * gauss[k];
    }
    c.target_mean = mean_u;
    c.target_sd = std::sqrt(var_u);
    coords[j] = std::move(c);
  }
  return NpnTransform(std::move(coords), delta);
}

double isnpn_log_density(const Eigen::VectorXd& theta, const IsnpnModel& model) {
  const Eigen::Index p = model.params.p();
  if (theta.size() != p || model.transform.p() != p) {
    throw std::invalid_argument("isnpn_log_density: dimension mismatch");
  }
  Eigen::VectorXd h(p);
  double log_jacobian = 0.0;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double t = theta(j) == kPi ? -kPi + model.params.epsilon() : theta(j);
    const double u = std::tan(0.5 * t);
    h(j) = model.transform.evaluate(j, u);
    log_jacobian += std::log(model.transform.derivative(j, u));
    log_jacobian -= std::log(2.0) + 2.0 * std::log(std::abs(std::cos(0.5 * t)));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(model.params.sigma());
  if (llt.info() != Eigen::Success) {
    throw numerical_error("isnpn_log_density: Cholesky factorization failed");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i));
  const Eigen::VectorXd y = llt.matrixL().solve(h - model.params.mu());
  return -0.5 * (p * std::log(kTwoPi) + log_det) - 0.5 * y.squaredNorm() +
         log_jacobian;
}

Eigen::MatrixXd npn_correlation(const AngleMatrix& data, const NpnTransform& transform,
                                double epsilon) {
  const Eigen::Index n = data.n(), p = data.p();
  if (transform.p() != p) {
    throw std::invalid_argument("npn_correlation: transform dimension mismatch");
  }
  Eigen::MatrixXd h(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      h(i, j) = transform.evaluate(
          j, stereographic_with_convention(data(i, j), epsilon));
    }
  }
  const Eigen::VectorXd mean = h.colwise().mean();
  Eigen::MatrixXd centered = h.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-8);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace torograph
