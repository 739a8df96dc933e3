#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "torograph/glasso.hpp"
#include "torograph/rng.hpp"
#include "torograph/stability.hpp"
#include "torograph/inverse_stereographic.hpp"

using namespace torograph;

namespace {

Eigen::MatrixXd chain_covariance(int p, double partial) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(p, p);
  for (int i = 0; i + 1 < p; ++i) omega(i, i + 1) = omega(i + 1, i) = -partial;
  return omega.inverse();
}

Eigen::MatrixXd sample_cov(const Eigen::MatrixXd& sigma, int n, Rng& rng) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd x(n, sigma.rows());
  for (int i = 0; i < n; ++i) {
    x.row(i) = (L * rng.normal_vector(sigma.rows())).transpose();
  }
  const Eigen::VectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd c = x.rowwise() - mean.transpose();
  return c.transpose() * c / static_cast<double>(n);
}

void BM_Glasso(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Rng rng(3);
  const Eigen::MatrixXd S = sample_cov(chain_covariance(p, 0.45), 400, rng);
  const Eigen::MatrixXd w =
      Eigen::MatrixXd::Ones(p, p) - Eigen::MatrixXd::Identity(p, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso(S, 0.05, w));
  }
}
BENCHMARK(BM_Glasso)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_AdaptiveGlasso(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Rng rng(5);
  const Eigen::MatrixXd S = sample_cov(chain_covariance(p, 0.45), 400, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(adaptive_glasso(S, 0.05));
  }
}
BENCHMARK(BM_AdaptiveGlasso)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_StabilitySelect(benchmark::State& state) {
  const AngleMatrix data = isn_sample(
      IsnParams(Eigen::VectorXd::Zero(5), chain_covariance(5, 0.45)), 200, 9);
  StabilityOptions opts;
  opts.repeats = static_cast<int>(state.range(0));
  opts.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stability_select(data, IsnModelKind::isn, opts));
  }
}
BENCHMARK(BM_StabilitySelect)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
