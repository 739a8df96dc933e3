#include "torograph/stability.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "torograph/errors.hpp"
#include "torograph/inverse_stereographic.hpp"
#include "torograph/nonparanormal.hpp"
#include "torograph/parallel.hpp"
#include "torograph/rng.hpp"

namespace torograph {

namespace {

struct RepeatOutcome {
  bool ok = false;
  double rho = 0.0;
  std::vector<std::pair<int, int>> edges;
  Eigen::MatrixXd precision;
};

Eigen::MatrixXd covariance_about(const Eigen::MatrixXd& rows, const Eigen::VectorXd& mean) {
  Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
  return centered.transpose() * centered / static_cast<double>(rows.rows());
}

/// Held-out Gaussian score per observation: log det Omega - tr(S_test Omega).
double held_out_score(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& s_test) {
  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("stability_select: non-PD precision in scoring");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < omega.rows(); ++i) {
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  }
  return log_det - (s_test.array() * omega.array()).sum();
}

}  // namespace

Eigen::VectorXd default_rho_grid(const Eigen::MatrixXd& S) {
  const Eigen::Index p = S.rows();
  double rho_max = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      if (i != j) rho_max = std::max(rho_max, std::abs(S(i, j)));
    }
  }
  if (rho_max <= 0.0) rho_max = 1.0;
  constexpr int kPoints = 20;
  Eigen::VectorXd grid(kPoints);
  const double lo = std::log(0.01), hi = std::log(1.0);
  for (int k = 0; k < kPoints; ++k) {
    grid(k) = rho_max * std::exp(lo + (hi - lo) * k / (kPoints - 1));
  }
  return grid;
}

StabilityResult stability_select(const AngleMatrix& data, IsnModelKind kind,
                                 const StabilityOptions& options) {
  const Eigen::Index n = data.n(), p = data.p();
  if (options.folds < 2) {
    throw std::invalid_argument("stability_select: folds >= 2 required");
  }
  if (n < 2 * options.folds) {
    throw std::invalid_argument("stability_select: need n >= 2 * folds");
  }
  if (options.repeats < 1) {
    throw std::invalid_argument("stability_select: repeats >= 1 required");
  }
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0)) {
    throw std::invalid_argument("stability_select: threshold must lie in [0, 1]");
  }

  // Working matrix on the transformed scale: u for ISN, h(u) for ISNPN
  // (transforms estimated once on the full sample).
  Eigen::MatrixXd x(n, p);
  if (kind == IsnModelKind::isn) {
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        x(i, j) = stereographic_with_convention(data(i, j), options.epsilon);
      }
    }
  } else {
    const NpnTransform transform = npn_estimate_transforms(data, options.epsilon);
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        x(i, j) = transform.evaluate(
            j, stereographic_with_convention(data(i, j), options.epsilon));
      }
    }
  }

  const Eigen::VectorXd full_mean = x.colwise().mean();
  const Eigen::MatrixXd full_cov = covariance_about(x, full_mean);
  const Eigen::VectorXd rho_grid =
      options.rho_grid.size() > 0 ? options.rho_grid : default_rho_grid(full_cov);

  const Rng root(options.seed);
  const int repeats = options.repeats;
  std::vector<RepeatOutcome> outcomes(repeats);

  parallel_for_index(static_cast<std::size_t>(repeats), [&](std::size_t rep) {
    RepeatOutcome& outcome = outcomes[rep];
    try {
      Rng rng = root.derive(rep);
      std::vector<Eigen::Index> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);

      // Contiguous fold slices of the shuffled order.
      std::vector<std::pair<Eigen::Index, Eigen::Index>> fold_bounds;
      const Eigen::Index base = n / options.folds, extra = n % options.folds;
      Eigen::Index start = 0;
      for (int f = 0; f < options.folds; ++f) {
        const Eigen::Index len = base + (f < extra ? 1 : 0);
        fold_bounds.emplace_back(start, start + len);
        start += len;
      }

      double best_score = -std::numeric_limits<double>::infinity();
      double best_rho = rho_grid(rho_grid.size() - 1);
      // Descending rho: on ties the first (larger, sparser) value wins.
      for (Eigen::Index g = rho_grid.size(); g-- > 0;) {
        const double rho = rho_grid(g);
        double score = 0.0;
        bool usable = true;
        for (int f = 0; f < options.folds && usable; ++f) {
          const auto [lo, hi] = fold_bounds[f];
          const Eigen::Index n_test = hi - lo, n_train = n - n_test;
          Eigen::MatrixXd train(n_train, p), test(n_test, p);
          Eigen::Index tr = 0;
          for (Eigen::Index i = 0; i < n; ++i) {
            if (i >= lo && i < hi) {
              test.row(i - lo) = x.row(order[i]);
            } else {
              train.row(tr++) = x.row(order[i]);
            }
          }
          const Eigen::VectorXd mean_train = train.colwise().mean();
          try {
            const Eigen::MatrixXd omega = adaptive_glasso(
                covariance_about(train, mean_train), rho, {}, options.glasso);
            score += held_out_score(omega, covariance_about(test, mean_train));
          } catch (const std::exception&) {
            usable = false;
          }
        }
        if (!usable) continue;
        score /= options.folds;
        if (score > best_score) {
          best_score = score;
          best_rho = rho;
        }
      }
      if (!std::isfinite(best_score)) return;  // every rho failed

      const Eigen::MatrixXd omega =
          adaptive_glasso(full_cov, best_rho, {}, options.glasso);
      outcome.rho = best_rho;
      outcome.precision = omega;
      for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = i + 1; j < p; ++j) {
          if (omega(i, j) != 0.0) {
            outcome.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
          }
        }
      }
      outcome.ok = true;
    } catch (const std::exception&) {
      outcome.ok = false;
    }
  });

  StabilityReport report;
  report.frequency = Eigen::MatrixXd::Zero(p, p);
  report.rho_grid = rho_grid;
  report.threshold = options.threshold;
  report.folds = options.folds;
  report.repeats = repeats;
  Eigen::MatrixXd last_precision = Eigen::MatrixXd::Zero(p, p);
  int successes = 0;
  for (const auto& outcome : outcomes) {
    if (!outcome.ok) {
      ++report.failed_repeats;
      continue;
    }
    ++successes;
    report.chosen_rho.push_back(outcome.rho);
    for (const auto& [i, j] : outcome.edges) {
      report.frequency(i, j) += 1.0;
      report.frequency(j, i) += 1.0;
    }
    last_precision = outcome.precision;
  }
  if (successes == 0) {
    throw numerical_error("stability_select: every repeat failed");
  }
  report.frequency /= static_cast<double>(successes);

  UndirectedGraph graph(static_cast<int>(p), data.column_names());
  EdgeReport edge_report;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      EdgeRecord rec;
      rec.i = static_cast<int>(i);
      rec.j = static_cast<int>(j);
      rec.stability = report.frequency(i, j);
      rec.selected = report.frequency(i, j) >= options.threshold;
      if (rec.selected) {
        graph.add_edge(rec.i, rec.j);
        rec.weight = last_precision(i, j) != 0.0
                         ? -last_precision(i, j) /
                               std::sqrt(last_precision(i, i) * last_precision(j, j))
                         : 0.0;
      }
      edge_report.push_back(rec);
    }
  }
  return {std::move(graph), std::move(report), std::move(edge_report), last_precision};
}

}  // namespace torograph
