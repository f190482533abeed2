// Micro-benchmarks for the hand-written numerical kernels: log-likelihoods
// and their gradients, maximum-likelihood fits, the two causality detectors,
// and the simulators that feed the Monte Carlo experiments.

#include <benchmark/benchmark.h>

#include <utility>

#include "tailgc/dgp.hpp"
#include "tailgc/estimation.hpp"
#include "tailgc/gc_tests.hpp"
#include "tailgc/rng.hpp"
#include "tailgc/series.hpp"

namespace tailgc {
namespace {

DarParams dar_params(int p) {
  DarParams params;
  params.nu = 0.5;
  params.chi = 0.05;
  params.gamma.assign(static_cast<std::size_t>(p), 1.0 / p);
  return params;
}

BiVdarParams bivdar_params(int p) {
  BiVdarParams params;
  params.eq1 = {0.5, 0.4, 0.05, {}, {}};
  params.eq2 = {0.5, 0.0, 0.05, {}, {}};
  params.eq1.gamma_self.assign(static_cast<std::size_t>(p), 1.0 / p);
  params.eq1.gamma_cross.assign(static_cast<std::size_t>(p), 1.0 / p);
  params.eq2.gamma_self.assign(static_cast<std::size_t>(p), 1.0 / p);
  params.eq2.gamma_cross.assign(static_cast<std::size_t>(p), 1.0 / p);
  return params;
}

void BM_LoglikDar(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const DarParams params = dar_params(p);
  const BinarySeries x = simulate_dar(params, t, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_dar(x, params));
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_LoglikDar)->Args({10000, 1})->Args({10000, 3})->Args({100000, 1});

void BM_LoglikDarGradient(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const DarParams params = dar_params(3);
  const BinarySeries x = simulate_dar(params, t, 2);
  DarParams grad = params;
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_dar_gradient(x, params, grad));
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_LoglikDarGradient)->Arg(10000)->Arg(100000);

void BM_LoglikVdarEquation(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const BiVdarParams params = bivdar_params(2);
  const auto [x, y] = simulate_vdar_bivariate(params, t, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_vdar_equation(x, y, params.eq1));
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_LoglikVdarEquation)->Arg(10000)->Arg(100000);

void BM_LoglikVdar1Panel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  const Vdar1Params params = star_coupling(n, StarKind::kOut, 4);
  const BinaryPanel panel = simulate_vdar1(params, t, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_vdar1(panel, params));
  }
  state.SetItemsProcessed(state.iterations() * t * n);
}
BENCHMARK(BM_LoglikVdar1Panel)->Args({10, 10000})->Args({25, 10000});

void BM_MleDar(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const BinarySeries x = simulate_dar(dar_params(p), t, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mle_dar(x, p));
  }
}
BENCHMARK(BM_MleDar)->Args({2000, 1})->Args({10000, 1})->Args({10000, 3});

void BM_MleVdarBivariate(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const auto [x, y] = simulate_vdar_bivariate(bivdar_params(1), t, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mle_vdar_bivariate(x, y, 1));
  }
}
BENCHMARK(BM_MleVdarBivariate)->Arg(2000)->Arg(10000);

void BM_MleVdar1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  const Vdar1Params params = star_coupling(n, StarKind::kOut, 8);
  const BinaryPanel panel = simulate_vdar1(params, t, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mle_vdar1(panel));
  }
}
BENCHMARK(BM_MleVdar1)->Args({5, 5000})->Args({10, 5000});

void BM_LrTailTest(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const int p_max = static_cast<int>(state.range(1));
  const auto [x, y] = simulate_vdar_bivariate(bivdar_params(1), t, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lr_tail_test(x, y, p_max));
  }
}
BENCHMARK(BM_LrTailTest)->Args({1000, 3})->Args({10000, 3});

void BM_HongTest(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const int bandwidth = static_cast<int>(state.range(1));
  const auto [x, y] = simulate_vdar_bivariate(bivdar_params(1), t, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hong_test(x, y, bandwidth));
  }
  state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_HongTest)->Args({1000, 5})->Args({10000, 5})->Args({100000, 20});

void BM_SimulateVdar1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int t = static_cast<int>(state.range(1));
  const Vdar1Params params = star_coupling(n, StarKind::kMixed, 12);
  std::uint64_t seed = 13;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_vdar1(params, t, seed++));
  }
  state.SetItemsProcessed(state.iterations() * t * n);
}
BENCHMARK(BM_SimulateVdar1)->Args({10, 10000})->Args({50, 10000});

void BM_BhFdr(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::vector<double> p_values(static_cast<std::size_t>(m));
  Rng rng(14);
  for (double& p : p_values) p = rng.next_double();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bh_fdr(p_values, 0.05));
  }
}
BENCHMARK(BM_BhFdr)->Arg(100)->Arg(10000);

}  // namespace
}  // namespace tailgc

BENCHMARK_MAIN();
