#include "torograph/wn_fit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "torograph/circular.hpp"
#include "torograph/optim.hpp"
#include "torograph/parallel.hpp"
#include "torograph/stats.hpp"

namespace torograph {

namespace {

constexpr std::int64_t kMaxFitGrid = 1 << 20;

Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& m, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

WnLogCholeskyObjective::WnLogCholeskyObjective(const AngleMatrix& data,
                                               Eigen::VectorXd mu,
                                               WindingTruncation trunc)
    : p_(data.p()) {
  if (mu.size() != p_ || trunc.dimension != p_) {
    throw std::invalid_argument("WnLogCholeskyObjective: dimension mismatch");
  }
  const std::int64_t grid = trunc.count();
  if (grid > kMaxFitGrid) {
    throw std::invalid_argument(
        "WnLogCholeskyObjective: winding grid too large for fitting");
  }
  centered_ = data.values();
  centered_.rowwise() -= mu.transpose();
  offsets_.resize(grid, p_);
  Eigen::Index row = 0;
  for_each_winding(trunc, [&](const Eigen::VectorXi& k) {
    offsets_.row(row++) = kTwoPi * k.cast<double>().transpose();
  });
}

Eigen::VectorXd WnLogCholeskyObjective::pack(const Eigen::MatrixXd& sigma) {
  const Eigen::Index p = sigma.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw numerical_error("WnLogCholeskyObjective::pack: sigma not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::VectorXd t(p * (p + 1) / 2);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j; i < p; ++i) {
      t(idx++) = i == j ? std::log(L(i, j)) : L(i, j);
    }
  }
  return t;
}

Eigen::MatrixXd WnLogCholeskyObjective::unpack(const Eigen::VectorXd& t,
                                               Eigen::Index p) {
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j; i < p; ++i) {
      L(i, j) = i == j ? std::exp(t(idx)) : t(idx);
      ++idx;
    }
  }
  return L * L.transpose();
}

double WnLogCholeskyObjective::operator()(const Eigen::VectorXd& t,
                                          Eigen::VectorXd& grad) const {
  const Eigen::Index p = p_;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(p, p);
  {
    Eigen::Index idx = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = j; i < p; ++i) {
        L(i, j) = i == j ? std::exp(t(idx)) : t(idx);
        ++idx;
      }
    }
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) log_det += 2.0 * std::log(L(i, i));
  const double log_norm = -0.5 * (p * std::log(kTwoPi) + log_det);

  const auto Lview = L.triangularView<Eigen::Lower>();
  const std::size_t n = static_cast<std::size_t>(centered_.rows());
  const Eigen::Index grid = offsets_.rows();

  constexpr std::size_t kBlock = 32;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_ll(n_blocks, 0.0);
  std::vector<Eigen::MatrixXd> block_m(n_blocks);

  parallel_blocks(n, kBlock, [&](std::size_t block, std::size_t begin, std::size_t end) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
    Eigen::VectorXd terms(grid);
    Eigen::VectorXd d(p), y(p);
    double ll = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const Eigen::VectorXd base = centered_.row(static_cast<Eigen::Index>(r));
      double max_term = -std::numeric_limits<double>::infinity();
      for (Eigen::Index g = 0; g < grid; ++g) {
        d = base + offsets_.row(g).transpose();
        y = Lview.solve(d);
        terms(g) = -0.5 * y.squaredNorm();
        max_term = std::max(max_term, terms(g));
      }
      double denom = 0.0;
      for (Eigen::Index g = 0; g < grid; ++g) {
        terms(g) = std::exp(terms(g) - max_term);
        denom += terms(g);
      }
      ll += log_norm + max_term + std::log(denom);
      for (Eigen::Index g = 0; g < grid; ++g) {
        const double w = terms(g) / denom;
        if (w < 1e-300) continue;
        d = base + offsets_.row(g).transpose();
        M.selfadjointView<Eigen::Lower>().rankUpdate(d, w);
      }
    }
    block_ll[block] = ll;
    block_m[block] = M;
  });

  double loglik = 0.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    loglik += block_ll[b];
    M += block_m[b];
  }
  M = Eigen::MatrixXd(M.selfadjointView<Eigen::Lower>());

  // G = d(-loglik)/d sigma = (n/2) sigma^-1 - (1/2) sigma^-1 M sigma^-1.
  Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd Linv = Lview.solve(identity);
  Eigen::MatrixXd sigma_inv = Linv.transpose() * Linv;
  Eigen::MatrixXd G = 0.5 * (static_cast<double>(n) * sigma_inv -
                             sigma_inv * M * sigma_inv);
  Eigen::MatrixXd dL = 2.0 * G * L;

  grad.resize(dimension());
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j; i < p; ++i) {
      grad(idx++) = i == j ? dL(i, j) * L(i, j) : dL(i, j);
    }
  }
  return -loglik;
}

Eigen::MatrixXd wn_moment_init(const AngleMatrix& data) {
  const Eigen::Index p = data.p();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(p, p);
  bool degenerate = false;
  Eigen::VectorXd rbar(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    rbar(j) = mean_resultant_length(data.column(j));
    if (rbar(j) <= 1e-12) degenerate = true;
  }
  if (degenerate) return sigma;

  for (Eigen::Index j = 0; j < p; ++j) {
    sigma(j, j) = std::max(-2.0 * std::log(std::min(rbar(j), 1.0 - 1e-15)), 1e-6);
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const ComplexMoments m = complex_moments(data, i, j);
      double probe = 0.0;
      if (m.r_ij > 1e-12) {
        probe = std::clamp(m.sigma_probe(), -10.0, 10.0);
      }
      sigma(i, j) = sigma(j, i) = probe;
    }
  }
  return floor_eigenvalues(sigma, 1e-4);
}

WnFitResult wn_fit_approx_mle(const AngleMatrix& data, const WindingTruncation& trunc,
                              const WnFitOptions& options) {
  if (data.n() <= data.p()) {
    throw std::invalid_argument("wn_fit_approx_mle: need n > p");
  }
  const Eigen::Index p = data.p();
  Eigen::VectorXd mu(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    mu(j) = circular_mean(data.column(j)).radians();
  }

  WnLogCholeskyObjective objective(data, mu, trunc);
  const Eigen::VectorXd t0 = WnLogCholeskyObjective::pack(wn_moment_init(data));

  LbfgsOptions opts;
  opts.max_iterations = options.max_iterations;
  opts.gradient_tol = options.gradient_tol;
  const LbfgsResult res = lbfgs_minimize(
      [&](const Eigen::VectorXd& t, Eigen::VectorXd& g) { return objective(t, g); },
      t0, opts);

  WnFitResult fit{WnParams(mu, WnLogCholeskyObjective::unpack(res.x, p)), -res.value,
                  res.iterations};
  if (!res.converged) {
    throw wn_convergence_error("wn_fit_approx_mle: iteration cap reached", fit);
  }
  return fit;
}

namespace {

WnEdgeSelectResult select_from_tests(const WnParams& fit, std::vector<EdgeRecord> records,
                                     double alpha, bool holm) {
  std::vector<double> pvals;
  pvals.reserve(records.size());
  for (const auto& rec : records) pvals.push_back(*rec.p_value);
  const std::vector<double> adjusted = holm ? holm_adjust(pvals) : pvals;
  UndirectedGraph graph(static_cast<int>(fit.p()));
  for (std::size_t e = 0; e < records.size(); ++e) {
    records[e].adjusted_p = adjusted[e];
    records[e].selected = adjusted[e] < alpha;
    if (records[e].selected) graph.add_edge(records[e].i, records[e].j);
  }
  return {std::move(graph), std::move(records)};
}

}  // namespace

WnEdgeSelectResult unwrapped_edge_select(const WnParams& fit, int n, double alpha,
                                         const WnEdgeSelectOptions& options) {
  const Eigen::Index p = fit.p();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("unwrapped_edge_select: alpha must lie in (0, 1)");
  }
  if (n <= p + 3) {
    throw std::invalid_argument("unwrapped_edge_select: need n > p + 3");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fit.sigma());
  const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  if (!(es.eigenvalues().minCoeff() > 0.0) || cond > 1e12) {
    throw numerical_error(
        "unwrapped_edge_select: sigma_hat near-singular (condition number " +
        std::to_string(cond) + ")");
  }
  const Eigen::MatrixXd omega = fit.sigma().inverse();
  const double z_scale = std::sqrt(static_cast<double>(n) - p - 1);

  std::vector<EdgeRecord> records;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double rho = -omega(i, j) / std::sqrt(omega(i, i) * omega(j, j));
      const double clamped = std::clamp(rho, -1.0 + 1e-15, 1.0 - 1e-15);
      const double z = std::atanh(clamped) * z_scale;
      EdgeRecord rec;
      rec.i = static_cast<int>(i);
      rec.j = static_cast<int>(j);
      rec.statistic = z;
      rec.p_value = two_sided_normal_pvalue(z);
      rec.weight = rho;
      records.push_back(rec);
    }
  }
  return select_from_tests(fit, std::move(records), alpha, options.holm);
}

WnEdgeSelectResult unwrapped_edge_select_covariance(const WnParams& fit,
                                                    const AngleMatrix& data,
                                                    const WindingTruncation& trunc,
                                                    double alpha,
                                                    const WnEdgeSelectOptions& options) {
  const Eigen::Index p = fit.p();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("unwrapped_edge_select: alpha must lie in (0, 1)");
  }
  // Observed information of the truncated likelihood in the vech(sigma)
  // coordinates, by central differences of the objective value.
  const Eigen::Index dim = p * (p + 1) / 2;
  WnLogCholeskyObjective objective(data, fit.mu(), trunc);

  auto negloglik = [&](const Eigen::MatrixXd& sigma) {
    Eigen::VectorXd g;
    return objective(WnLogCholeskyObjective::pack(sigma), g);
  };

  auto vech = [&](Eigen::Index i, Eigen::Index j) {
    // step for entry (i, j)
    return 1e-4 * std::sqrt(fit.sigma()(i, i) * fit.sigma()(j, j));
  };

  std::vector<std::pair<Eigen::Index, Eigen::Index>> coords;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = j; i < p; ++i) coords.emplace_back(i, j);
  }
  Eigen::MatrixXd hess(dim, dim);
  const Eigen::MatrixXd sigma0 = fit.sigma();
  const double f0 = negloglik(sigma0);
  auto bumped = [&](std::size_t a, double ha, std::size_t b, double hb) {
    Eigen::MatrixXd s = sigma0;
    auto [ia, ja] = coords[a];
    s(ia, ja) += ha;
    if (ia != ja) s(ja, ia) += ha;
    auto [ib, jb] = coords[b];
    s(ib, jb) += hb;
    if (ib != jb) s(jb, ib) += hb;
    return negloglik(s);
  };
  for (std::size_t a = 0; a < coords.size(); ++a) {
    const double ha = vech(coords[a].first, coords[a].second);
    hess(a, a) =
        (bumped(a, ha, a, 0.0) - 2.0 * f0 + bumped(a, -ha, a, 0.0)) / (ha * ha);
    for (std::size_t b = a + 1; b < coords.size(); ++b) {
      const double hb = vech(coords[b].first, coords[b].second);
      const double fpp = bumped(a, ha, b, hb);
      const double fpm = bumped(a, ha, b, -hb);
      const double fmp = bumped(a, -ha, b, hb);
      const double fmm = bumped(a, -ha, b, -hb);
      hess(a, b) = hess(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * ha * hb);
    }
  }
  const Eigen::MatrixXd cov_of_estimates =
      floor_eigenvalues(hess, 1e-10).ldlt().solve(Eigen::MatrixXd::Identity(dim, dim));

  std::vector<EdgeRecord> records;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    const auto [i, j] = coords[a];
    if (i == j) continue;
    const double se = std::sqrt(std::max(cov_of_estimates(a, a), 1e-300));
    const double z = sigma0(i, j) / se;
    EdgeRecord rec;
    rec.i = static_cast<int>(j);
    rec.j = static_cast<int>(i);
    rec.statistic = z;
    rec.p_value = two_sided_normal_pvalue(z);
    rec.weight = sigma0(i, j);
    records.push_back(rec);
  }
  std::sort(records.begin(), records.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
    return std::pair(x.i, x.j) < std::pair(y.i, y.j);
  });
  return select_from_tests(fit, std::move(records), alpha, options.holm);
}

}  // namespace torograph
