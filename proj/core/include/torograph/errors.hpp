#pragma once

#include <stdexcept>
#include <string>

namespace torograph {

/// Numerical failure: singular or degenerate matrices, ill-conditioned
/// systems, quantities whose value is undefined for the given data.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// A map was evaluated at a point where it is singular (e.g. tan(pi/2)).
class singularity_error : public numerical_error {
 public:
  explicit singularity_error(const std::string& what) : numerical_error(what) {}
};

/// A circular mean direction was requested for a sample with zero resultant.
class undefined_direction_error : public numerical_error {
 public:
  explicit undefined_direction_error(const std::string& what)
      : numerical_error(what) {}
};

/// A parent set refers to a vertex that does not precede its child.
class acyclicity_error : public std::invalid_argument {
 public:
  explicit acyclicity_error(const std::string& what)
      : std::invalid_argument(what) {}
};

/// An iterative procedure hit its iteration cap before meeting its
/// tolerance. Carries the objective at the best iterate; fit routines
/// derive from this to attach the iterate itself.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, int iterations, double objective)
      : std::runtime_error(what), iterations_(iterations), objective_(objective) {}

  int iterations() const { return iterations_; }
  double objective() const { return objective_; }

 private:
  int iterations_;
  double objective_;
};

}  // namespace torograph
