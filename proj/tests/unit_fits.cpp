#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/quadrature.hpp"
#include "torograph/bessel.hpp"
#include "torograph/circular.hpp"
#include "torograph/cvm_dag.hpp"
#include "torograph/rng.hpp"
#include "torograph/wn_fit.hpp"

using namespace torograph;

namespace {

// Relative error of an analytic gradient against central differences.
double gradient_check(const std::function<double(const Eigen::VectorXd&,
                                                 Eigen::VectorXd&)>& fn,
                      const Eigen::VectorXd& x, double step = 1e-6) {
  Eigen::VectorXd analytic(x.size());
  fn(x, analytic);
  double worst = 0.0;
  Eigen::VectorXd probe = x;
  Eigen::VectorXd dummy(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double fp = fn(probe, dummy);
    probe(i) = x(i) - step;
    const double fm = fn(probe, dummy);
    probe(i) = x(i);
    const double fd = (fp - fm) / (2.0 * step);
    const double scale = std::max({std::abs(analytic(i)), std::abs(fd), 1e-8});
    worst = std::max(worst, std::abs(analytic(i) - fd) / scale);
  }
  return worst;
}

CvmDagModel chain_cvm(int p, double kappa, double lambda) {
  std::vector<int> ordering(p);
  std::vector<std::vector<int>> parents(p);
  std::vector<std::vector<double>> coeffs(p);
  for (int j = 0; j < p; ++j) {
    ordering[j] = j;
    if (j > 0) {
      parents[j] = {j - 1};
      coeffs[j] = {lambda};
    }
  }
  return CvmDagModel(Dag(ordering, parents), Eigen::VectorXd::Zero(p),
                     Eigen::VectorXd::Constant(p, kappa), coeffs);
}

}  // namespace

TEST_CASE("cvm log likelihood fixed values") {
  SUBCASE("uniform product") {
    const CvmDagModel model = chain_cvm(3, 0.0, 0.0);
    Rng rng(4);
    Eigen::MatrixXd m(20, 3);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = rng.uniform(-kPi, kPi);
    }
    const AngleMatrix data = AngleMatrix::from_raw(m);
    CHECK(cvm_log_likelihood(data, model) ==
          doctest::Approx(20 * 3 * std::log(1.0 / kTwoPi)).epsilon(1e-12));
  }
  SUBCASE("single node at the mode") {
    std::vector<std::vector<int>> parents(1);
    std::vector<std::vector<double>> coeffs(1);
    const CvmDagModel model(Dag({0}, parents), Eigen::VectorXd::Zero(1),
                            Eigen::VectorXd::Ones(1), coeffs);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(7, 1);
    const AngleMatrix data = AngleMatrix::from_raw(m);
    const double expected =
        7.0 * (1.0 - std::log(kTwoPi * testsupport::bessel_i0_series(1.0)));
    CHECK(cvm_log_likelihood(data, model) == doctest::Approx(expected).epsilon(1e-13));
  }
  SUBCASE("additive over row blocks") {
    const CvmDagModel model = chain_cvm(2, 1.5, 0.8);
    const AngleMatrix a = cvm_sample(model, 30, 1);
    const AngleMatrix b = cvm_sample(model, 20, 2);
    Eigen::MatrixXd stacked(50, 2);
    stacked.topRows(30) = a.values();
    stacked.bottomRows(20) = b.values();
    const AngleMatrix both = AngleMatrix::from_raw(stacked);
    CHECK(cvm_log_likelihood(both, model) ==
          doctest::Approx(cvm_log_likelihood(a, model) +
                          cvm_log_likelihood(b, model))
              .epsilon(1e-12));
  }
}

TEST_CASE("cvm node objective gradient matches finite differences") {
  const CvmDagModel truth = chain_cvm(3, 2.0, 1.2);
  const AngleMatrix data = cvm_sample(truth, 120, 9);
  const double mu2 = circular_mean(data.column(2)).radians();
  const CvmNodeObjective obj(data, 2, {0, 1}, mu2);
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd t(3);
    t << rng.uniform(-1.5, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
    const double err = gradient_check(
        [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) { return obj(x, g); }, t);
    CHECK(err < 1e-5);
  }
}

TEST_CASE("cvm_fit_node") {
  SUBCASE("no parents: kappa solves A1(kappa) = rbar") {
    const CvmDagModel truth = chain_cvm(1, 3.0, 0.0);
    const AngleMatrix data = cvm_sample(truth, 400, 12);
    const auto fit = cvm_fit_node(data, 0, {});
    const double rbar = mean_resultant_length(data.column(0));
    // Solve A1(k) = rbar by bisection (independent oracle).
    double lo = 1e-6, hi = 500.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (bessel_a1(mid) < rbar ? lo : hi) = mid;
    }
    CHECK(fit.kappa == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-5));
    CHECK(circular_distance(fit.mu, circular_mean(data.column(0)).radians()) == 0.0);
  }
  SUBCASE("null coupling shrinks with n") {
    const CvmDagModel truth = chain_cvm(2, 1.5, 0.0);
    const AngleMatrix data = cvm_sample(truth, 5000, 21);
    const auto fit = cvm_fit_node(data, 1, {0});
    CHECK(std::abs(fit.lambda[0]) < 0.1);
  }
  SUBCASE("coupling recovery") {
    const CvmDagModel truth = chain_cvm(2, 1.0, 2.0);
    const AngleMatrix data = cvm_sample(truth, 4000, 31);
    const auto fit = cvm_fit_node(data, 1, {0});
    CHECK(fit.lambda[0] == doctest::Approx(2.0).epsilon(0.10));
    CHECK(fit.kappa == doctest::Approx(1.0).epsilon(0.10));
  }
  SUBCASE("recovery at the strong end of the parameter envelope") {
    const CvmDagModel truth = chain_cvm(2, 10.0, 3.0);
    const AngleMatrix data = cvm_sample(truth, 10000, 37);
    const auto fit = cvm_fit_node(data, 1, {0});
    CHECK(circular_distance(fit.mu, 0.0) < 0.05);
    CHECK(fit.kappa == doctest::Approx(10.0).epsilon(0.10));
    CHECK(fit.lambda[0] == doctest::Approx(3.0).epsilon(0.10));
  }
  SUBCASE("invariant to adding 2 pi to raw inputs") {
    const CvmDagModel truth = chain_cvm(2, 2.0, 1.0);
    const AngleMatrix data = cvm_sample(truth, 150, 41);
    Eigen::MatrixXd shifted_values = data.values();
    shifted_values.col(0).array() += kTwoPi;  // re-wrapped by AngleMatrix
    const AngleMatrix shifted = AngleMatrix::from_raw(shifted_values);
    const auto a = cvm_fit_node(data, 1, {0});
    const auto b = cvm_fit_node(shifted, 1, {0});
    CHECK(a.kappa == doctest::Approx(b.kappa).epsilon(1e-9));
    CHECK(a.lambda[0] == doctest::Approx(b.lambda[0]).epsilon(1e-9));
  }
  SUBCASE("preconditions") {
    const AngleMatrix tiny = AngleMatrix::from_raw(Eigen::MatrixXd::Zero(3, 2));
    CHECK_THROWS_AS(cvm_fit_node(tiny, 1, {0}), std::invalid_argument);
  }
}

TEST_CASE("cvm sampling distribution") {
  SUBCASE("uniform DAG passes Kuiper per column") {
    const CvmDagModel model = chain_cvm(2, 0.0, 0.0);
    const AngleMatrix data = cvm_sample(model, 10000, 55);
    for (int j = 0; j < 2; ++j) {
      const Eigen::VectorXd column = data.column(j);
      std::vector<double> col(column.data(), column.data() + column.size());
      CHECK(testsupport::kuiper_uniform_pvalue(col) > 0.01);
    }
  }
  SUBCASE("concentrated single node") {
    std::vector<std::vector<int>> parents(1);
    std::vector<std::vector<double>> coeffs(1);
    const CvmDagModel model(Dag({0}, parents), Eigen::VectorXd::Ones(1),
                            Eigen::VectorXd::Constant(1, 50.0), coeffs);
    const AngleMatrix data = cvm_sample(model, 10000, 60);
    CHECK(circular_distance(circular_mean(data.column(0)).radians(), 1.0) < 0.05);
  }
  SUBCASE("determinism") {
    const CvmDagModel model = chain_cvm(3, 1.0, 0.7);
    CHECK(cvm_sample(model, 40, 7).values() == cvm_sample(model, 40, 7).values());
  }
}

TEST_CASE("cvm lrt selection") {
  SUBCASE("alpha = 0 keeps nothing") {
    const CvmDagModel truth = chain_cvm(3, 1.0, 2.0);
    const AngleMatrix data = cvm_sample(truth, 150, 70);
    const auto sel = cvm_lrt_select(data, {0, 1, 2}, 0.0);
    CHECK(sel.dag.edges().empty());
  }
  SUBCASE("strong edges detected, absent edges mostly rejected") {
    int hits = 0;
    for (int rep = 0; rep < 20; ++rep) {
      const CvmDagModel truth = chain_cvm(2, 1.0, 5.0);
      const AngleMatrix data = cvm_sample(truth, 200, 100 + rep);
      const auto sel = cvm_lrt_select(data, {0, 1}, 0.05);
      if (sel.dag.parents(1) == std::vector<int>{0}) ++hits;
    }
    CHECK(hits >= 19);  // detection frequency > 0.95
  }
  SUBCASE("LRT statistic invariant under common rotation") {
    const CvmDagModel truth = chain_cvm(3, 1.5, 1.0);
    const AngleMatrix data = cvm_sample(truth, 250, 81);
    const auto a = cvm_lrt_select(data, {0, 1, 2}, 0.05);
    const auto b = cvm_lrt_select(data.rotated(2.1), {0, 1, 2}, 0.05);
    REQUIRE(a.report.size() == b.report.size());
    for (std::size_t e = 0; e < a.report.size(); ++e) {
      CHECK(*a.report[e].statistic ==
            doctest::Approx(*b.report[e].statistic).epsilon(1e-5));
    }
  }
}

TEST_CASE("wn log-cholesky objective gradient matches finite differences") {
  Eigen::VectorXd mu(3);
  mu << 0.2, -0.5, 1.0;
  Eigen::MatrixXd sigma(3, 3);
  sigma << 0.5, 0.15, 0.05, 0.15, 0.4, -0.1, 0.05, -0.1, 0.6;
  const auto sample = wn_sample(WnParams(mu, sigma), 60, 91);
  Eigen::VectorXd mu_hat(3);
  for (int j = 0; j < 3; ++j) {
    mu_hat(j) = circular_mean(sample.angles.column(j)).radians();
  }
  const WnLogCholeskyObjective obj(sample.angles, mu_hat, {1, 3});
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd t(obj.dimension());
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = rng.uniform(-0.8, 0.4);
    const double err = gradient_check(
        [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) { return obj(x, g); }, t);
    CHECK(err < 1e-5);
  }
}

TEST_CASE("wn moment initialization") {
  Eigen::VectorXd mu(2);
  mu << 0.4, -1.2;
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.3, 0.1, 0.1, 0.25;
  const auto sample = wn_sample(WnParams(mu, sigma), 50000, 17);
  const Eigen::MatrixXd init = wn_moment_init(sample.angles);
  CHECK(init(0, 0) == doctest::Approx(0.3).epsilon(0.1));
  CHECK(init(1, 1) == doctest::Approx(0.25).epsilon(0.1));
  CHECK(init(0, 1) == doctest::Approx(0.1).epsilon(0.25));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(init, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  SUBCASE("vanishing resultant falls back to the identity") {
    Eigen::MatrixXd m(4, 2);
    m << 0.0, 0.2, kPi / 2, 0.3, kPi, 0.25, -kPi / 2, 0.2;  // column 1 cancels
    const Eigen::MatrixXd fallback = wn_moment_init(AngleMatrix::from_raw(m));
    CHECK(fallback == Eigen::MatrixXd::Identity(2, 2));
  }
}

TEST_CASE("wn fit") {
  SUBCASE("diagonal truth recovered within 15 percent") {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
    Eigen::MatrixXd sigma = 0.2 * Eigen::MatrixXd::Identity(3, 3);
    const auto sample = wn_sample(WnParams(mu, sigma), 2000, 7);
    const auto fit = wn_fit_approx_mle(sample.angles, {1, 3});
    for (int j = 0; j < 3; ++j) {
      CHECK(fit.params.sigma()(j, j) == doctest::Approx(0.2).epsilon(0.15));
    }
  }
  SUBCASE("conditional-independence pattern recovered in the precision") {
    // sigma^-1 tridiagonal: partial correlation (1,3) is zero.
    Eigen::MatrixXd omega(3, 3);
    omega << 1.0, -0.5, 0.0, -0.5, 1.25, -0.5, 0.0, -0.5, 1.0;
    Eigen::MatrixXd sigma = 0.35 * omega.inverse();
    const auto sample = wn_sample(WnParams(Eigen::VectorXd::Zero(3), sigma), 2000, 6);
    const auto fit = wn_fit_approx_mle(sample.angles, {1, 3});
    const Eigen::MatrixXd prec = fit.params.sigma().inverse();
    const double rho13 = -prec(0, 2) / std::sqrt(prec(0, 0) * prec(2, 2));
    CHECK(std::abs(rho13) < 0.1);
  }
  SUBCASE("tiny variances agree with the naive Gaussian MLE") {
    Eigen::VectorXd mu(2);
    mu << 0.3, -0.2;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.001, 0.0002, 0.0002, 0.0008;
    const auto sample = wn_sample(WnParams(mu, sigma), 500, 3);
    const auto fit = wn_fit_approx_mle(sample.angles, {1, 2});
    // Gaussian MLE on the raw angles (k = 0 regime).
    const Eigen::MatrixXd x = sample.angles.values();
    const Eigen::VectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / x.rows();
    CHECK((fit.params.sigma() - cov).cwiseAbs().maxCoeff() < 1e-3);
    for (int j = 0; j < 2; ++j) {
      CHECK(circular_distance(fit.params.mu()(j), mean(j)) < 1e-3);
    }
  }
  SUBCASE("rotation equivariance") {
    Eigen::VectorXd mu(2);
    mu << 0.1, 0.9;
    Eigen::MatrixXd sigma(2, 2);
    sigma << 0.4, -0.12, -0.12, 0.3;
    const auto sample = wn_sample(WnParams(mu, sigma), 300, 19);
    const double delta = 1.7;
    const auto base = wn_fit_approx_mle(sample.angles, {1, 2});
    const auto rotated = wn_fit_approx_mle(sample.angles.rotated(delta), {1, 2});
    for (int j = 0; j < 2; ++j) {
      CHECK(circular_distance(rotated.params.mu()(j),
                              wrap_radians(base.params.mu()(j) + delta)) < 1e-6);
    }
    CHECK((rotated.params.sigma() - base.params.sigma()).cwiseAbs().maxCoeff() <
          1e-5);
  }
}

TEST_CASE("unwrapped edge selection") {
  SUBCASE("diagonal precision keeps no edges") {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(3);
    const WnParams fit(mu, 0.3 * Eigen::MatrixXd::Identity(3, 3));
    const auto sel = unwrapped_edge_select(fit, 100, 0.9999);
    CHECK(sel.graph.edges().empty());
    for (const auto& rec : sel.report) {
      CHECK(*rec.statistic == doctest::Approx(0.0));
      CHECK(*rec.adjusted_p >= *rec.p_value);
    }
  }
  SUBCASE("strong partial correlation detected") {
    Eigen::MatrixXd omega(3, 3);
    omega << 1.0, -0.5, 0.0, -0.5, 1.25, -0.5, 0.0, -0.5, 1.0;
    Eigen::MatrixXd sigma = 0.3 * omega.inverse();
    const WnParams fit(Eigen::VectorXd::Zero(3), sigma);
    const auto sel = unwrapped_edge_select(fit, 500, 0.05);
    CHECK(sel.graph.has_edge(0, 1));
    CHECK(sel.graph.has_edge(1, 2));
    CHECK_FALSE(sel.graph.has_edge(0, 2));
  }
  SUBCASE("preconditions") {
    const WnParams fit(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    CHECK_THROWS_AS(unwrapped_edge_select(fit, 4, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(unwrapped_edge_select(fit, 100, 1.5), std::invalid_argument);
  }
  SUBCASE("near-singular sigma reports a condition-number diagnostic") {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
    sigma(1, 1) = 1e-13;
    const WnParams fit(Eigen::VectorXd::Zero(2), sigma);
    try {
      unwrapped_edge_select(fit, 100, 0.05);
      FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
      CHECK(std::string(e.what()).find("condition number") != std::string::npos);
    }
  }
}

TEST_CASE("covariance-scale edge selection variant") {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.3, 0.15, 0.15, 0.3;
  const auto sample = wn_sample(WnParams(mu, sigma), 400, 23);
  const auto fit = wn_fit_approx_mle(sample.angles, {1, 2});
  const auto sel =
      unwrapped_edge_select_covariance(fit.params, sample.angles, {1, 2}, 0.05);
  REQUIRE(sel.report.size() == 1);
  CHECK(sel.report[0].selected);  // correlation 0.5 at n = 400 is unmissable
  CHECK(sel.graph.has_edge(0, 1));
}
