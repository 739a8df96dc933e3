#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "torograph/angle_matrix.hpp"

namespace torograph {

/// Parameters of the multivariate wrapped Normal: unwrapped mean mu and
/// SPD covariance sigma. The model identifies mu only modulo 2 pi per
/// coordinate, so mu is stored wrapped into (-pi, pi].
class WnParams {
 public:
  WnParams(Eigen::VectorXd mu, Eigen::MatrixXd sigma);

  Eigen::Index p() const { return mu_.size(); }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }

 private:
  Eigen::VectorXd mu_;
  Eigen::MatrixXd sigma_;
};

/// Finite winding grid {-r, ..., r}^p standing in for Z^p; r = 1 is the
/// default working grid.
struct WindingTruncation {
  int radius = 1;
  int dimension = 1;

  /// Number of grid points (2r+1)^p; throws when it exceeds the cap.
  std::int64_t count() const;
};

/// Calls fn(k) for every winding vector in odometer order (deterministic).
void for_each_winding(const WindingTruncation& trunc,
                      const std::function<void(const Eigen::VectorXi&)>& fn);

/// Truncated wrapped-Normal density evaluator; factors sigma once.
class WnDensity {
 public:
  WnDensity(WnParams params, WindingTruncation trunc);

  /// log sum_k N(theta + 2 pi k; mu, sigma) over the winding grid,
  /// log-sum-exp stabilized.
  double log_density(const Eigen::VectorXd& theta) const;

  /// Sum of log_density over the rows of data (fixed-block parallel
  /// reduction; byte-deterministic for any thread count).
  double log_likelihood(const AngleMatrix& data) const;

  const WnParams& params() const { return params_; }
  const WindingTruncation& truncation() const { return trunc_; }

 private:
  WnParams params_;
  WindingTruncation trunc_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double log_norm_;  // -0.5 log |2 pi sigma|
};

double wn_log_density(const Eigen::VectorXd& theta, const WnParams& params,
                      const WindingTruncation& trunc);

struct WnSample {
  AngleMatrix angles;
  Eigen::MatrixXi windings;  // realized K = (X - Theta) / (2 pi)
};

/// Draws X ~ N(mu, sigma) and returns Theta = wrap(X) with the winding
/// numbers; deterministic for a fixed seed.
WnSample wn_sample(const WnParams& params, int n, std::uint64_t seed,
                   std::vector<std::string> column_names = {});

/// Result 1: Theta_A ~ WN(mu_A, sigma_AA).
WnParams wn_marginal(const WnParams& params, const std::vector<int>& A);

/// Result 2: Theta_A | Theta_B = theta_B, K_B = k_B is wrapped Normal with
/// the Gaussian conditional moments at x_B = theta_B + 2 pi k_B.
WnParams wn_conditional_given_unwrapped(const WnParams& params,
                                        const std::vector<int>& A,
                                        const std::vector<int>& B,
                                        const Eigen::VectorXd& theta_B,
                                        const Eigen::VectorXi& k_B);

/// Result 3: Theta_A | Theta_S is the wrapped mixture of Result-2
/// conditionals, weighted by w_S(theta_S, k_S) over the winding grid of S.
class WnConditionalMixture {
 public:
  struct Component {
    Eigen::VectorXi k_S;
    double weight;
    WnParams conditional;
  };

  WnConditionalMixture(std::vector<Component> components, WindingTruncation trunc_A);

  const std::vector<Component>& components() const { return components_; }

  /// Mixture density of Theta_A at theta_A (wrapping each component over
  /// the A winding grid).
  double log_density(const Eigen::VectorXd& theta_A) const;

 private:
  std::vector<Component> components_;
  WindingTruncation trunc_A_;
};

WnConditionalMixture wn_conditional_mixture(const WnParams& params,
                                            const std::vector<int>& A,
                                            const std::vector<int>& S,
                                            const Eigen::VectorXd& theta_S,
                                            const WindingTruncation& trunc);

/// Truncation saturation diagnostic: max over rows of
/// |log_density at radius r+1 - log_density at radius r|.
double wn_truncation_gap(const AngleMatrix& data, const WnParams& params, int radius);

}  // namespace torograph
