#include "torograph/circular.hpp"

#include <cmath>
#include <stdexcept>

#include "torograph/errors.hpp"

namespace torograph {

namespace {

// Resultants below this are treated as zero: the direction of a vanishing
// resultant is a tie, not a number.
constexpr double kResultantFloor = 1e-12;

struct Resultant {
  double sin_mean, cos_mean, length;
};

Resultant resultant_of(const Eigen::VectorXd& angles) {
  if (angles.size() < 1) {
    throw std::invalid_argument("circular_mean: empty sample");
  }
  const double s = angles.array().sin().mean();
  const double c = angles.array().cos().mean();
  return {s, c, std::hypot(s, c)};
}

}  // namespace

Angle circular_mean(const Eigen::VectorXd& angles) {
  const Resultant r = resultant_of(angles);
  if (r.length <= kResultantFloor) {
    throw undefined_direction_error(
        "circular_mean: zero resultant length, direction undefined");
  }
  return Angle(std::atan2(r.sin_mean, r.cos_mean));
}

double mean_resultant_length(const Eigen::VectorXd& angles) {
  return std::min(1.0, resultant_of(angles).length);
}

CircularSummary circular_summary(const AngleMatrix& data) {
  if (data.n() < 2) {
    throw std::invalid_argument("circular_summary: need n >= 2");
  }
  const Eigen::Index p = data.p();
  CircularSummary out;
  out.mean_direction.reserve(p);
  out.mean_resultant_length.resize(p);
  out.mardia_variance.resize(p);
  out.circular_variance.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Eigen::VectorXd col = data.column(j);
    const double rbar = mean_resultant_length(col);
    if (rbar <= kResultantFloor) {
      throw undefined_direction_error("circular_summary: column '" +
                                      data.column_names()[j] +
                                      "' has zero resultant length");
    }
    out.mean_direction.push_back(circular_mean(col));
    out.mean_resultant_length(j) = rbar;
    out.mardia_variance(j) = -2.0 * std::log(rbar);
    out.circular_variance(j) = 1.0 - rbar;
  }
  return out;
}

double ComplexMoments::sigma_probe() const {
  if (r_i <= 0.0 || r_j <= 0.0 || r_ij <= 0.0) {
    throw numerical_error("complex_moments: vanishing resultant, probe undefined");
  }
  return std::log(r_i * r_j / r_ij);
}

ComplexMoments complex_moments(const AngleMatrix& data, Eigen::Index i,
                               Eigen::Index j) {
  if (data.n() < 2) {
    throw std::invalid_argument("complex_moments: need n >= 2");
  }
  if (i == j) {
    throw std::invalid_argument("complex_moments: indices must differ");
  }
  if (i < 0 || j < 0 || i >= data.p() || j >= data.p()) {
    throw std::invalid_argument("complex_moments: column index out of range");
  }
  const Eigen::VectorXd a = data.column(i);
  const Eigen::VectorXd b = data.column(j);
  ComplexMoments m;
  m.r_i = mean_resultant_length(a);
  m.r_j = mean_resultant_length(b);
  m.r_ij = mean_resultant_length(a + b);
  return m;
}

double stereographic(Angle theta) {
  if (theta.radians() == kPi) {
    throw singularity_error("stereographic: singular at theta = pi");
  }
  return std::tan(0.5 * theta.radians());
}

Angle inverse_stereographic(double u) {
  if (!std::isfinite(u)) {
    throw std::invalid_argument("inverse_stereographic: non-finite input");
  }
  return Angle(2.0 * std::atan(u));
}

}  // namespace torograph
