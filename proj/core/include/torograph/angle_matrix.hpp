#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "torograph/angle.hpp"

namespace torograph {

/// An n x p sample of angles, one row per observation and one named column
/// per circular variable. Every entry is kept wrapped in (-pi, pi].
class AngleMatrix {
 public:
  /// Wraps every entry of `raw`. Requires n >= 1, p >= 1 and exactly p
  /// distinct column names.
  AngleMatrix(Eigen::MatrixXd raw, std::vector<std::string> column_names);

  /// Convenience constructor with generated names "theta1".."thetap".
  static AngleMatrix from_raw(Eigen::MatrixXd raw,
                              const std::string& prefix = "theta");

  Eigen::Index n() const { return values_.rows(); }
  Eigen::Index p() const { return values_.cols(); }

  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Eigen::Index row, Eigen::Index col) const {
    return values_(row, col);
  }
  Eigen::VectorXd column(Eigen::Index j) const { return values_.col(j); }
  Eigen::VectorXd row(Eigen::Index i) const { return values_.row(i); }

  const std::vector<std::string>& column_names() const { return names_; }

  /// Index of the named column; throws std::invalid_argument if absent.
  Eigen::Index column_index(const std::string& name) const;

  /// All angles shifted by a common rotation delta, re-wrapped.
  AngleMatrix rotated(double delta) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

}  // namespace torograph
