#include "torograph/optim.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace torograph {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& fn, const Eigen::VectorXd& x0,
                           const LbfgsOptions& options) {
  const Eigen::Index d = x0.size();
  Eigen::VectorXd x = x0;
  Eigen::VectorXd grad(d);
  double f = fn(x, grad);
  if (!finite(f)) {
    throw std::invalid_argument("lbfgs_minimize: objective not finite at start");
  }

  struct Pair {
    Eigen::VectorXd s, y;
    double rho;
  };
  std::deque<Pair> history;

  LbfgsResult result;
  result.x = x;
  result.value = f;
  result.gradient = grad;

  Eigen::VectorXd direction(d), x_new(d), grad_new(d);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tol) {
      result.converged = true;
      break;
    }

    // Two-loop recursion.
    direction = -grad;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
      const Pair& h = history[i];
      alpha[i] = h.rho * h.s.dot(direction);
      direction -= alpha[i] * h.y;
    }
    if (!history.empty()) {
      const Pair& last = history.back();
      direction *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const Pair& h = history[i];
      const double beta = h.rho * h.y.dot(direction);
      direction += (alpha[i] - beta) * h.s;
    }

    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {  // not a descent direction; reset to steepest descent
      history.clear();
      direction = -grad;
      slope = grad.dot(direction);
    }

    // Armijo backtracking.
    double step = history.empty() ? std::min(1.0, 1.0 / grad.norm()) : 1.0;
    bool accepted = false;
    double f_new = f;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      x_new = x + step * direction;
      f_new = fn(x_new, grad_new);
      if (finite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stuck: return best iterate so far

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      history.push_back({s, y, 1.0 / sy});
      if (static_cast<int>(history.size()) > options.memory) history.pop_front();
    }

    const double step_norm = s.lpNorm<Eigen::Infinity>();
    x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
    result.iterations = iter + 1;
    if (f < result.value) {
      result.x = x;
      result.value = f;
      result.gradient = grad;
    }
    if (step_norm <= options.step_tol) {
      result.converged = true;
      break;
    }
  }

  if (!result.converged && grad.lpNorm<Eigen::Infinity>() <= options.gradient_tol) {
    result.converged = true;
  }
  // Keep the final iterate when it ties the recorded best.
  if (f <= result.value) {
    result.x = x;
    result.value = f;
    result.gradient = grad;
  }
  return result;
}

}  // namespace torograph
