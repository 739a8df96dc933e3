#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "torograph/bessel.hpp"
#include "torograph/rng.hpp"
#include "torograph/sine_model.hpp"
#include "torograph/von_mises.hpp"
#include "torograph/wn_fit.hpp"
#include "torograph/wrapped_normal.hpp"

using namespace torograph;

namespace {

WnParams random_wn(int p, Rng& rng) {
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = rng.normal();
  }
  Eigen::MatrixXd sigma =
      0.1 * (a * a.transpose() / p + Eigen::MatrixXd::Identity(p, p));
  Eigen::VectorXd mu(p);
  for (int i = 0; i < p; ++i) mu(i) = rng.uniform(-kPi, kPi);
  return WnParams(mu, sigma);
}

void BM_BesselI0(benchmark::State& state) {
  const double kappa = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_i0(kappa));
  }
}
BENCHMARK(BM_BesselI0)->Arg(1)->Arg(20)->Arg(200);

void BM_VmSample(benchmark::State& state) {
  Rng rng(7);
  const VonMisesParams params(Angle(0.4), static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(vm_sample(params, rng));
  }
}
BENCHMARK(BM_VmSample)->Arg(1)->Arg(50);

void BM_WnLogDensity(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const int radius = static_cast<int>(state.range(1));
  Rng rng(11);
  const WnDensity dens(random_wn(p, rng), {radius, p});
  Eigen::VectorXd theta(p);
  for (int i = 0; i < p; ++i) theta(i) = rng.uniform(-kPi, kPi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dens.log_density(theta));
  }
}
BENCHMARK(BM_WnLogDensity)->Args({2, 1})->Args({5, 1})->Args({8, 1})->Args({5, 3});

void BM_WnFitObjective(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Rng rng(13);
  const WnParams params = random_wn(p, rng);
  const auto sample = wn_sample(params, 200, 17);
  const WnLogCholeskyObjective obj(sample.angles, params.mu(), {1, p});
  const Eigen::VectorXd t = WnLogCholeskyObjective::pack(params.sigma());
  Eigen::VectorXd grad(obj.dimension());
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj(t, grad));
  }
}
BENCHMARK(BM_WnFitObjective)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SineFullConditional(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  Rng rng(19);
  Eigen::VectorXd mu(p), kappa(p), theta(p);
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    mu(i) = rng.uniform(-kPi, kPi);
    kappa(i) = rng.uniform(0.5, 3.0);
    theta(i) = rng.uniform(-kPi, kPi);
    for (int j = i + 1; j < p; ++j) {
      lambda(i, j) = lambda(j, i) = rng.uniform(-1.0, 1.0);
    }
  }
  const SineModelParams params(mu, kappa, lambda);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sine_full_conditional(0, theta, params));
  }
}
BENCHMARK(BM_SineFullConditional)->Arg(5)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
