#pragma once

#include <Eigen/Core>
#include <functional>

namespace torograph {

struct LbfgsOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-8;  // infinity norm of the gradient
  double step_tol = 1e-13;     // infinity norm of the parameter update
  int memory = 10;
  int max_line_search = 60;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
};

/// Objective: writes the gradient at x into `grad` and returns f(x).
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Limited-memory BFGS minimization with Armijo backtracking. Returns the
/// best iterate found; `converged` reports whether a tolerance was met
/// before the iteration cap.
LbfgsResult lbfgs_minimize(const Objective& fn, const Eigen::VectorXd& x0,
                           const LbfgsOptions& options = {});

}  // namespace torograph
