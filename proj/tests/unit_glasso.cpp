#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "torograph/glasso.hpp"
#include "torograph/inverse_stereographic.hpp"
#include "torograph/rng.hpp"
#include "torograph/stability.hpp"

using namespace torograph;

namespace {

Eigen::MatrixXd unit_weights(int p) {
  return Eigen::MatrixXd::Ones(p, p) - Eigen::MatrixXd::Identity(p, p);
}

Eigen::MatrixXd chain_precision(int p, double partial) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) {
    omega(i, i + 1) = omega(i + 1, i) = -partial;
  }
  // Unit diagonal with off-diagonal -partial: partial correlations equal
  // `partial` on chain edges and zero elsewhere.
  return omega;
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& sigma, int n, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd x(n, sigma.rows());
  for (int i = 0; i < n; ++i) {
    x.row(i) = (L * rng.normal_vector(sigma.rows())).transpose();
  }
  const Eigen::VectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  return centered.transpose() * centered / static_cast<double>(n);
}

}  // namespace

TEST_CASE("glasso limiting cases") {
  Rng rng(5);
  Eigen::MatrixXd omega_true = chain_precision(4, 0.4);
  const Eigen::MatrixXd sigma = omega_true.inverse();
  const Eigen::MatrixXd S = sample_covariance(sigma, 400, rng);

  SUBCASE("rho = 0 returns the inverse") {
    const Eigen::MatrixXd omega = glasso(S, 0.0, unit_weights(4));
    CHECK((omega - S.inverse()).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("rho above the max off-diagonal gives a diagonal estimate") {
    const double rho_max = [&] {
      double m = 0.0;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          if (i != j) m = std::max(m, std::abs(S(i, j)));
        }
      }
      return m;
    }();
    const Eigen::MatrixXd omega = glasso(S, rho_max * 1.001, unit_weights(4));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) CHECK(omega(i, j) == 0.0);
      }
      CHECK(omega(i, i) == doctest::Approx(1.0 / S(i, i)).epsilon(1e-8));
    }
  }
  SUBCASE("KKT residual within tolerance at moderate rho") {
    const double rho = 0.08;
    const Eigen::MatrixXd w = unit_weights(4);
    const Eigen::MatrixXd omega = glasso(S, rho, w);
    CHECK(glasso_kkt_residual(S, rho, w, omega) < 1e-5);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(glasso(S, -0.1, unit_weights(4)), std::invalid_argument);
    CHECK_THROWS_AS(glasso(S, 0.1, unit_weights(3)), std::invalid_argument);
    Eigen::MatrixXd neg = unit_weights(4);
    neg(0, 1) = neg(1, 0) = -1.0;
    CHECK_THROWS_AS(glasso(S, 0.1, neg), std::invalid_argument);
  }
}

TEST_CASE("glasso recovers a tridiagonal sparsity pattern along the path") {
  Rng rng(9);
  const Eigen::MatrixXd omega_true = chain_precision(5, 0.4);
  const Eigen::MatrixXd sigma = omega_true.inverse();
  int recovered = 0;
  const int replicates = 20;
  for (int rep = 0; rep < replicates; ++rep) {
    const Eigen::MatrixXd S = sample_covariance(sigma, 500, rng);
    const Eigen::VectorXd grid = default_rho_grid(S);
    bool hit = false;
    for (Eigen::Index g = 0; g < grid.size() && !hit; ++g) {
      const Eigen::MatrixXd omega = adaptive_glasso(S, grid(g));
      bool exact = true;
      for (int i = 0; i < 5 && exact; ++i) {
        for (int j = i + 1; j < 5 && exact; ++j) {
          const bool want = std::abs(i - j) == 1;
          if ((omega(i, j) != 0.0) != want) exact = false;
        }
      }
      hit = exact;
    }
    if (hit) ++recovered;
  }
  CHECK(recovered >= 18);  // >= 90 percent of replicates
}

TEST_CASE("stability selection") {
  // ISN chain data: theta = 2 atan(x) with x Gaussian, chain precision.
  const Eigen::MatrixXd omega_true = chain_precision(4, 0.45);
  const Eigen::MatrixXd sigma = omega_true.inverse();
  const AngleMatrix data =
      isn_sample(IsnParams(Eigen::VectorXd::Zero(4), sigma), 250, 31);

  StabilityOptions opts;
  opts.repeats = 20;
  opts.seed = 7;
  const StabilityResult res = stability_select(data, IsnModelKind::isn, opts);

  SUBCASE("chain edges are stable, others are not selected") {
    CHECK(res.graph.has_edge(0, 1));
    CHECK(res.graph.has_edge(1, 2));
    CHECK(res.graph.has_edge(2, 3));
    CHECK_FALSE(res.graph.has_edge(0, 3));
  }
  SUBCASE("frequencies live in [0, 1] and report is complete") {
    CHECK(res.edge_report.size() == 6);
    for (const auto& rec : res.edge_report) {
      CHECK(*rec.stability >= 0.0);
      CHECK(*rec.stability <= 1.0);
      CHECK(rec.selected == (*rec.stability >= 0.5));
    }
    CHECK(res.report.failed_repeats == 0);
    CHECK(res.report.chosen_rho.size() == 20);
  }
  SUBCASE("threshold filter is monotone") {
    StabilityOptions strict = opts;
    strict.threshold = 1.0;
    const StabilityResult tight = stability_select(data, IsnModelKind::isn, strict);
    for (const auto& [i, j] : tight.graph.edges()) {
      CHECK(res.graph.has_edge(i, j));
    }
  }
  SUBCASE("deterministic under a fixed seed and any thread count") {
    const StabilityResult again = stability_select(data, IsnModelKind::isn, opts);
    CHECK(again.report.frequency == res.report.frequency);
    CHECK(again.report.chosen_rho == res.report.chosen_rho);
  }
  SUBCASE("isnpn path runs the transform first") {
    const StabilityResult npn = stability_select(data, IsnModelKind::isnpn, opts);
    CHECK(npn.graph.has_edge(0, 1));
    CHECK(npn.graph.has_edge(1, 2));
    CHECK(npn.graph.has_edge(2, 3));
  }
  SUBCASE("preconditions") {
    StabilityOptions bad = opts;
    bad.threshold = 1.5;
    CHECK_THROWS_AS(stability_select(data, IsnModelKind::isn, bad),
                    std::invalid_argument);
    Eigen::MatrixXd tiny = data.values().topRows(6);
    CHECK_THROWS_AS(
        stability_select(AngleMatrix::from_raw(tiny), IsnModelKind::isn, opts),
        std::invalid_argument);
  }
}
