#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/quadrature.hpp"
#include "torograph/bessel.hpp"
#include "torograph/circular.hpp"
#include "torograph/cvm_dag.hpp"
#include "torograph/rng.hpp"
#include "torograph/sine_model.hpp"
#include "torograph/von_mises.hpp"

using namespace torograph;

TEST_CASE("vm_log_density fixed values and normalization") {
  SUBCASE("kappa = 0 is the circular uniform") {
    const VonMisesParams uniform(Angle(0.4), 0.0);
    for (double t : {-3.0, 0.0, 1.7}) {
      CHECK(vm_log_density(Angle(t), uniform) ==
            doctest::Approx(std::log(1.0 / kTwoPi)).epsilon(1e-14));
    }
  }
  SUBCASE("mode value against the series oracle") {
    const VonMisesParams p(Angle(0.3), 2.0);
    const double expected =
        2.0 - std::log(kTwoPi * testsupport::bessel_i0_series(2.0));
    CHECK(vm_log_density(Angle(0.3), p) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("density integrates to one") {
    for (double kappa : {0.0, 1.0, 10.0}) {
      const VonMisesParams p(Angle(-1.2), kappa);
      const double mass = testsupport::integrate_t1(
          [&](double t) { return std::exp(vm_log_density(Angle(t), p)); }, 10000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("sine model density basics") {
  Eigen::VectorXd mu(2), kappa(2);
  mu << 0.5, -0.3;
  kappa << 1.0, 2.0;
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(2, 2);

  SUBCASE("lambda = 0 reduces to the sum of cosines") {
    const SineModelParams params(mu, kappa, lambda);
    Eigen::VectorXd theta(2);
    theta << 1.0, 2.0;
    const double expected = 1.0 * std::cos(1.0 - 0.5) + 2.0 * std::cos(2.0 + 0.3);
    CHECK(sine_log_density_unnormalized(theta, params) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("at theta = mu the sine terms vanish") {
    lambda(0, 1) = lambda(1, 0) = 3.0;
    const SineModelParams params(mu, kappa, lambda);
    CHECK(sine_log_density_unnormalized(mu, params) ==
          doctest::Approx(kappa.sum()).epsilon(1e-14));
  }
  SUBCASE("symmetric parameters make the density exchangeable") {
    Eigen::VectorXd mu2(2), kappa2(2);
    mu2 << 0.4, 0.4;
    kappa2 << 1.5, 1.5;
    lambda(0, 1) = lambda(1, 0) = -0.8;
    const SineModelParams params(mu2, kappa2, lambda);
    Eigen::VectorXd theta(2), swapped(2);
    theta << 0.9, -1.4;
    swapped << -1.4, 0.9;
    CHECK(sine_log_density_unnormalized(theta, params) ==
          doctest::Approx(sine_log_density_unnormalized(swapped, params)));
  }
  SUBCASE("invalid parameters rejected") {
    Eigen::MatrixXd bad = lambda;
    bad(0, 1) = 1.0;  // asymmetric
    CHECK_THROWS_AS(SineModelParams(mu, kappa, bad), std::invalid_argument);
    Eigen::VectorXd negk(2);
    negk << 1.0, -0.1;
    CHECK_THROWS_AS(SineModelParams(mu, negk, lambda), std::invalid_argument);
  }
}

TEST_CASE("sine full conditional closed form") {
  SUBCASE("no coupling returns the marginal parameters") {
    Eigen::VectorXd mu(2), kappa(2);
    mu << 0.5, -0.3;
    kappa << 1.0, 2.0;
    const SineModelParams params(mu, kappa, Eigen::MatrixXd::Zero(2, 2));
    Eigen::VectorXd theta(2);
    theta << 0.0, 1.2;
    const VonMisesParams cond = sine_full_conditional(0, theta, params);
    CHECK(cond.mu.radians() == doctest::Approx(0.5));
    CHECK(cond.kappa == doctest::Approx(1.0));
  }
  SUBCASE("p = 2 concentration sqrt(kappa^2 + lambda^2 sin^2)") {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(2), kappa(2);
    kappa << 2.0, 1.0;
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(2, 2);
    lambda(0, 1) = lambda(1, 0) = 1.0;
    const SineModelParams params(mu, kappa, lambda);
    Eigen::VectorXd theta(2);
    theta << 0.0, kPi / 2;  // theta_2 - mu_2 = pi/2
    const VonMisesParams cond = sine_full_conditional(0, theta, params);
    CHECK(cond.kappa == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
  }
  SUBCASE("degenerate kappa_j = b_j = 0 falls back to uniform") {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd kappa = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(2, 2);
    const SineModelParams params(mu, kappa, lambda);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
    CHECK(sine_full_conditional(0, theta, params).kappa == 0.0);
  }
}

namespace {

// Normalized slice of the unnormalized joint at coordinate j: the decisive
// oracle for the conditional's closed form.
void check_slice_matches_conditional(const SineModelParams& params, int j,
                                     Eigen::VectorXd theta, double tol) {
  const int grid = 512;
  std::vector<double> joint(grid);
  double mass = 0.0;
  for (int g = 0; g < grid; ++g) {
    theta(j) = testsupport::node(g, grid);
    joint[g] = std::exp(sine_log_density_unnormalized(theta, params));
    mass += joint[g];
  }
  mass *= kTwoPi / grid;

  const VonMisesParams cond = sine_full_conditional(j, theta, params);
  double mass_cond = 0.0;
  for (int g = 0; g < grid; ++g) {
    const double t = testsupport::node(g, grid);
    const double slice = joint[g] / mass;
    const double direct = std::exp(vm_log_density(Angle(t), cond));
    mass_cond += direct;
    CHECK(std::abs(slice - direct) < tol);
  }
  CHECK(mass_cond * kTwoPi / grid == doctest::Approx(1.0).epsilon(1e-8));
}

}  // namespace

TEST_CASE("sine full conditional equals the normalized joint slice") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = trial % 2 == 0 ? 2 : 3;
    Eigen::VectorXd mu(p), kappa(p);
    Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
      mu(i) = rng.uniform(-kPi, kPi);
      kappa(i) = rng.uniform(0.1, 4.0);
      for (int j = i + 1; j < p; ++j) {
        lambda(i, j) = lambda(j, i) = rng.uniform(-2.0, 2.0);
      }
    }
    const SineModelParams params(mu, kappa, lambda);
    Eigen::VectorXd theta(p);
    for (int i = 0; i < p; ++i) theta(i) = rng.uniform(-kPi, kPi);
    check_slice_matches_conditional(params, trial % p, theta, 1e-6);
  }
}

TEST_CASE("sine normalizing constant at p = 1 is 2 pi I0") {
  Eigen::VectorXd mu(1), kappa(1);
  mu << 0.7;
  kappa << 2.5;
  const SineModelParams params(mu, kappa, Eigen::MatrixXd::Zero(1, 1));
  CHECK(sine_log_normalizing_constant(params, 4096) ==
        doctest::Approx(std::log(kTwoPi * bessel_i0(2.5))).epsilon(1e-10));
  Eigen::VectorXd mu4 = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(sine_log_normalizing_constant(
                      SineModelParams(mu4, Eigen::VectorXd::Ones(4),
                                      Eigen::MatrixXd::Zero(4, 4)),
                      64),
                  std::invalid_argument);
}

TEST_CASE("vm_sample distributional checks") {
  SUBCASE("uniform at kappa = 0 passes the Kuiper test") {
    Rng rng(23);
    std::vector<double> draws(10000);
    const VonMisesParams uniform(Angle(0.0), 0.0);
    for (auto& d : draws) d = vm_sample(uniform, rng).radians();
    CHECK(testsupport::kuiper_uniform_pvalue(draws) > 0.01);
  }
  SUBCASE("high concentration pins the mean") {
    Rng rng(29);
    const VonMisesParams peaked(Angle(1.0), 50.0);
    Eigen::VectorXd draws(10000);
    for (int i = 0; i < draws.size(); ++i) {
      draws(i) = vm_sample(peaked, rng).radians();
    }
    CHECK(circular_distance(circular_mean(draws).radians(), 1.0) < 0.05);
  }
  SUBCASE("sample mean resultant matches A1(kappa)") {
    Rng rng(31);
    const VonMisesParams p(Angle(-0.7), 3.0);
    Eigen::VectorXd draws(20000);
    for (int i = 0; i < draws.size(); ++i) draws(i) = vm_sample(p, rng).radians();
    CHECK(mean_resultant_length(draws) ==
          doctest::Approx(bessel_a1(3.0)).epsilon(0.02));
  }
}
