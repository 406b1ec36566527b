// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "kbloch/costmodel.hpp"
#include "kbloch/factorize.hpp"
#include "kbloch/lambda.hpp"

using namespace kbloch;

static void BM_QroamOptimizer(benchmark::State& state) {
  const std::int64_t L = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(qroam_cost(L, 64, QroamMode::Output));
}
BENCHMARK(BM_QroamOptimizer)->Arg(1 << 10)->Arg(1 << 20)->Arg(1LL << 40);

static void BM_QroamBrute(benchmark::State& state) {
  const std::int64_t L = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(qroam_cost_brute(L, 64, QroamMode::Output));
}
BENCHMARK(BM_QroamBrute)->Arg(1 << 10)->Arg(1 << 20)->Arg(1LL << 40);

static void BM_CostModel(benchmark::State& state) {
  const Lcu lcu = static_cast<Lcu>(state.range(0));
  const int a = static_cast<int>(state.range(1));
  const CostParams P = sweep_params(lcu, Mesh({a, a, a}), SweepModel{}, false);
  for (auto _ : state) benchmark::DoNotOptimize(cost(lcu, P).per_step);
}
BENCHMARK(BM_CostModel)->ArgsProduct({{0, 1, 2, 3}, {2, 6, 20}});

static void BM_Cholesky(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const KHamiltonian H = generate_synthetic(Mesh({1, 2, 2}), n, 1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(cholesky_sf(H, 1e-8).M);
}
BENCHMARK(BM_Cholesky)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_DoubleFactorize(benchmark::State& state) {
  const KHamiltonian H = generate_synthetic(Mesh({1, 2, 2}), static_cast<int>(state.range(0)), 1, 0.5);
  const CholeskyFactors C = cholesky_sf(H, 1e-8);
  for (auto _ : state) benchmark::DoNotOptimize(double_factorize(C, 1e-6).xi);
}
BENCHMARK(BM_DoubleFactorize)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_LambdaTHC(benchmark::State& state) {
  const SyntheticTHC syn = generate_synthetic_thc(Mesh({2, 2, 2}), 2, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_thc(syn.H, syn.thc).total);
}
BENCHMARK(BM_LambdaTHC)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
