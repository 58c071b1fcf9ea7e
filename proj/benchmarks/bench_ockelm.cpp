#include <random>

#include <benchmark/benchmark.h>

#include "oneclass/fastica.hpp"
#include "oneclass/ockelm.hpp"

namespace {

oneclass::Dataset random_data(oneclass::Index n, oneclass::Index d) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  oneclass::Dataset out;
  out.rows.resize(n, d);
  for (oneclass::Index i = 0; i < n; ++i)
    for (oneclass::Index j = 0; j < d; ++j) out.rows(i, j) = u(rng) * u(rng);
  for (oneclass::Index j = 0; j < d; ++j) out.feature_names.push_back("f" + std::to_string(j));
  return out;
}

void BM_RegularizedSolve(benchmark::State& state) {
  const oneclass::Dataset d = random_data(state.range(0), 9);
  const oneclass::Matrix g = oneclass::gram(d.rows, oneclass::KernelSpec::rbf(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(oneclass::solve_regularized(g, 10.0).coefficients.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RegularizedSolve)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_FastIca(benchmark::State& state) {
  const oneclass::Dataset d = random_data(state.range(0), state.range(1));
  for (auto _ : state) {
    const auto t = oneclass::ica_fit(d, {0, 200, 1e-4, 1});
    benchmark::DoNotOptimize(t.unmixing.data());
  }
}
BENCHMARK(BM_FastIca)->Args({229, 9})->Args({500, 34})->Unit(benchmark::kMillisecond);

}  // namespace
