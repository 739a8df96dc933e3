#include "torograph/angle_matrix.hpp"

#include <stdexcept>
#include <unordered_set>

namespace torograph {

AngleMatrix::AngleMatrix(Eigen::MatrixXd raw, std::vector<std::string> column_names)
    : values_(std::move(raw)), names_(std::move(column_names)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("AngleMatrix: need n >= 1 and p >= 1");
  }
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
    throw std::invalid_argument("AngleMatrix: one name per column required");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) {
      throw std::invalid_argument("AngleMatrix: duplicate column name '" + name + "'");
    }
  }
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      values_(i, j) = wrap_radians(values_(i, j));
    }
  }
}

AngleMatrix AngleMatrix::from_raw(Eigen::MatrixXd raw, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    names.push_back(prefix + std::to_string(j + 1));
  }
  return AngleMatrix(std::move(raw), std::move(names));
}

Eigen::Index AngleMatrix::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<Eigen::Index>(j);
  }
  throw std::invalid_argument("AngleMatrix: no column named '" + name + "'");
}

AngleMatrix AngleMatrix::rotated(double delta) const {
  Eigen::MatrixXd shifted = values_.array() + delta;
  return AngleMatrix(std::move(shifted), names_);
}

}  // namespace torograph
