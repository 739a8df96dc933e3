#include "torograph/wrapped_normal.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "torograph/errors.hpp"
#include "torograph/parallel.hpp"
#include "torograph/rng.hpp"
#include "torograph/stats.hpp"

namespace torograph {

namespace {

// (2r+1)^p capped to keep the joint enumeration tractable.
constexpr std::int64_t kMaxGridPoints = 1 << 24;

void check_index_set(const std::vector<int>& set, Eigen::Index p, const char* name) {
  if (set.empty()) {
    throw std::invalid_argument(std::string("wrapped_normal: index set ") + name +
                                " must be non-empty");
  }
  std::vector<bool> seen(p, false);
  for (int v : set) {
    if (v < 0 || v >= p) {
      throw std::invalid_argument(std::string("wrapped_normal: index out of range in ") +
                                  name);
    }
    if (seen[v]) {
      throw std::invalid_argument(std::string("wrapped_normal: duplicate index in ") +
                                  name);
    }
    seen[v] = true;
  }
}

void check_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a) {
    for (int y : b) {
      if (x == y) {
        throw std::invalid_argument("wrapped_normal: index sets must be disjoint");
      }
    }
  }
}

Eigen::VectorXd subset(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out(k) = v(idx[k]);
  return out;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  }
  return out;
}

}  // namespace

WnParams::WnParams(Eigen::VectorXd mu, Eigen::MatrixXd sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  const Eigen::Index p = mu_.size();
  if (p < 1) throw std::invalid_argument("WnParams: p >= 1 required");
  if (sigma_.rows() != p || sigma_.cols() != p) {
    throw std::invalid_argument("WnParams: sigma dimension mismatch");
  }
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("WnParams: sigma must be symmetric");
  }
  sigma_ = 0.5 * (sigma_ + sigma_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma_,
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("WnParams: sigma must be positive definite");
  }
  for (Eigen::Index j = 0; j < p; ++j) mu_(j) = wrap_radians(mu_(j));
}

std::int64_t WindingTruncation::count() const {
  if (radius < 0 || dimension < 1) {
    throw std::invalid_argument("WindingTruncation: radius >= 0, dimension >= 1");
  }
  std::int64_t total = 1;
  const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;
  for (int d = 0; d < dimension; ++d) {
    total *= side;
    if (total > kMaxGridPoints) {
      throw std::invalid_argument(
          "WindingTruncation: grid (2r+1)^p exceeds the enumeration cap");
    }
  }
  return total;
}

void for_each_winding(const WindingTruncation& trunc,
                      const std::function<void(const Eigen::VectorXi&)>& fn) {
  trunc.count();  // validates size
  const int r = trunc.radius;
  Eigen::VectorXi k = Eigen::VectorXi::Constant(trunc.dimension, -r);
  for (;;) {
    fn(k);
    int d = 0;
    while (d < trunc.dimension) {
      if (k(d) < r) {
        ++k(d);
        break;
      }
      k(d) = -r;
      ++d;
    }
    if (d == trunc.dimension) break;
  }
}

WnDensity::WnDensity(WnParams params, WindingTruncation trunc)
    : params_(std::move(params)), trunc_(trunc), llt_(params_.sigma()) {
  if (trunc_.dimension != params_.p()) {
    throw std::invalid_argument("WnDensity: truncation dimension mismatch");
  }
  if (llt_.info() != Eigen::Success) {
    throw numerical_error("WnDensity: Cholesky factorization failed");
  }
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < params_.p(); ++i) {
    log_det += 2.0 * std::log(llt_.matrixL()(i, i));
  }
  log_norm_ = -0.5 * (params_.p() * std::log(kTwoPi) + log_det);
}

double WnDensity::log_density(const Eigen::VectorXd& theta) const {
  if (theta.size() != params_.p()) {
    throw std::invalid_argument("WnDensity: dimension mismatch");
  }
  const Eigen::VectorXd base = theta - params_.mu();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(trunc_.count()));
  Eigen::VectorXd d(params_.p());
  for_each_winding(trunc_, [&](const Eigen::VectorXi& k) {
    d = base + kTwoPi * k.cast<double>();
    const Eigen::VectorXd y = llt_.matrixL().solve(d);
    terms.push_back(log_norm_ - 0.5 * y.squaredNorm());
  });
  return log_sum_exp(terms);
}

double WnDensity::log_likelihood(const AngleMatrix& data) const {
  if (data.p() != params_.p()) {
    throw std::invalid_argument("WnDensity: data dimension mismatch");
  }
  const std::size_t n = static_cast<std::size_t>(data.n());
  constexpr std::size_t kBlock = 64;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(n_blocks, 0.0);
  parallel_blocks(n, kBlock, [&](std::size_t block, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      acc += log_density(data.row(static_cast<Eigen::Index>(r)));
    }
    partial[block] = acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double wn_log_density(const Eigen::VectorXd& theta, const WnParams& params,
                      const WindingTruncation& trunc) {
  return WnDensity(params, trunc).log_density(theta);
}

WnSample wn_sample(const WnParams& params, int n, std::uint64_t seed,
                   std::vector<std::string> column_names) {
  if (n < 1) throw std::invalid_argument("wn_sample: n >= 1 required");
  const Eigen::Index p = params.p();
  Eigen::LLT<Eigen::MatrixXd> llt(params.sigma());
  if (llt.info() != Eigen::Success) {
    throw numerical_error("wn_sample: Cholesky factorization failed");
  }
  Rng rng(seed);
  Eigen::MatrixXd angles(n, p);
  Eigen::MatrixXi windings(n, p);
  for (int r = 0; r < n; ++r) {
    const Eigen::VectorXd x =
        params.mu() + Eigen::MatrixXd(llt.matrixL()) * rng.normal_vector(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double theta = wrap_radians(x(j));
      angles(r, j) = theta;
      windings(r, j) = static_cast<int>(std::llround((x(j) - theta) / kTwoPi));
    }
  }
  AngleMatrix data = column_names.empty()
                         ? AngleMatrix::from_raw(std::move(angles))
                         : AngleMatrix(std::move(angles), std::move(column_names));
  return {std::move(data), std::move(windings)};
}

WnParams wn_marginal(const WnParams& params, const std::vector<int>& A) {
  check_index_set(A, params.p(), "A");
  return WnParams(subset(params.mu(), A), submatrix(params.sigma(), A, A));
}

WnParams wn_conditional_given_unwrapped(const WnParams& params,
                                        const std::vector<int>& A,
                                        const std::vector<int>& B,
                                        const Eigen::VectorXd& theta_B,
                                        const Eigen::VectorXi& k_B) {
  check_index_set(A, params.p(), "A");
  check_index_set(B, params.p(), "B");
  check_disjoint(A, B);
  if (theta_B.size() != static_cast<Eigen::Index>(B.size()) ||
      k_B.size() != theta_B.size()) {
    throw std::invalid_argument("wn_conditional_given_unwrapped: size mismatch");
  }
  const Eigen::VectorXd x_B = theta_B + kTwoPi * k_B.cast<double>();
  const Eigen::MatrixXd sigma_AB = submatrix(params.sigma(), A, B);
  const Eigen::MatrixXd sigma_BB = submatrix(params.sigma(), B, B);
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_BB);
  if (llt.info() != Eigen::Success) {
    throw numerical_error(
        "wn_conditional_given_unwrapped: sigma_BB is numerically singular");
  }
  // Gaussian conditional moments; the regression term enters with a plus
  // sign, the form the torus quadrature identity reproduces.
  const Eigen::VectorXd mean =
      subset(params.mu(), A) + sigma_AB * llt.solve(x_B - subset(params.mu(), B));
  const Eigen::MatrixXd cov =
      submatrix(params.sigma(), A, A) - sigma_AB * llt.solve(sigma_AB.transpose());
  return WnParams(mean, cov);
}

WnConditionalMixture::WnConditionalMixture(std::vector<Component> components,
                                           WindingTruncation trunc_A)
    : components_(std::move(components)), trunc_A_(trunc_A) {
  if (components_.empty()) {
    throw std::invalid_argument("WnConditionalMixture: no components");
  }
}

double WnConditionalMixture::log_density(const Eigen::VectorXd& theta_A) const {
  std::vector<double> terms;
  terms.reserve(components_.size());
  for (const auto& comp : components_) {
    if (comp.weight <= 0.0) continue;
    terms.push_back(std::log(comp.weight) +
                    WnDensity(comp.conditional, trunc_A_).log_density(theta_A));
  }
  return log_sum_exp(terms);
}

WnConditionalMixture wn_conditional_mixture(const WnParams& params,
                                            const std::vector<int>& A,
                                            const std::vector<int>& S,
                                            const Eigen::VectorXd& theta_S,
                                            const WindingTruncation& trunc) {
  check_index_set(A, params.p(), "A");
  check_index_set(S, params.p(), "S");
  check_disjoint(A, S);
  if (theta_S.size() != static_cast<Eigen::Index>(S.size())) {
    throw std::invalid_argument("wn_conditional_mixture: theta_S size mismatch");
  }

  const WnParams marg_S = wn_marginal(params, S);
  WnDensity dens_S(marg_S, WindingTruncation{trunc.radius, static_cast<int>(S.size())});

  // Unnormalized log-weights w_S(theta_S, k_S) over the S winding grid.
  std::vector<Eigen::VectorXi> grid;
  std::vector<double> log_w;
  const Eigen::VectorXd base = theta_S - marg_S.mu();
  Eigen::LLT<Eigen::MatrixXd> llt(marg_S.sigma());
  for_each_winding(WindingTruncation{trunc.radius, static_cast<int>(S.size())},
                   [&](const Eigen::VectorXi& k) {
                     const Eigen::VectorXd d = base + kTwoPi * k.cast<double>();
                     const Eigen::VectorXd y = llt.matrixL().solve(d);
                     grid.push_back(k);
                     log_w.push_back(-0.5 * y.squaredNorm());
                   });
  const double lse = log_sum_exp(log_w);

  std::vector<WnConditionalMixture::Component> components;
  components.reserve(grid.size());
  double weight_sum = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double w = std::exp(log_w[idx] - lse);
    weight_sum += w;
    components.push_back(
        {grid[idx], w,
         wn_conditional_given_unwrapped(params, A, S, theta_S, grid[idx])});
  }
  // Renormalize the float residue so the weights sum to one exactly enough.
  for (auto& comp : components) comp.weight /= weight_sum;

  return WnConditionalMixture(std::move(components),
                              WindingTruncation{trunc.radius, static_cast<int>(A.size())});
}

double wn_truncation_gap(const AngleMatrix& data, const WnParams& params, int radius) {
  const WnDensity coarse(params, WindingTruncation{radius, static_cast<int>(params.p())});
  const WnDensity fine(params,
                       WindingTruncation{radius + 1, static_cast<int>(params.p())});
  double gap = 0.0;
  for (Eigen::Index r = 0; r < data.n(); ++r) {
    const Eigen::VectorXd row = data.row(r);
    gap = std::max(gap, std::abs(fine.log_density(row) - coarse.log_density(row)));
  }
  return gap;
}

}  // namespace torograph
