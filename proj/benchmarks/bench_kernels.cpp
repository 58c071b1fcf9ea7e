#include <random>

#include <benchmark/benchmark.h>

#include "oneclass/kernels.hpp"

namespace {

oneclass::Matrix random_rows(oneclass::Index n, oneclass::Index d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  oneclass::Matrix m(n, d);
  for (oneclass::Index i = 0; i < n; ++i)
    for (oneclass::Index j = 0; j < d; ++j) m(i, j) = g(rng);
  return m;
}

void BM_LogGak(benchmark::State& state) {
  const auto len = state.range(0);
  const oneclass::Matrix m = random_rows(2, len);
  const oneclass::KernelSpec spec = oneclass::KernelSpec::tgak(1.0, static_cast<double>(state.range(1)), false);
  std::span<const double> x(m.row(0).data(), static_cast<std::size_t>(len));
  std::span<const double> y(m.row(1).data(), static_cast<std::size_t>(len));
  for (auto _ : state) benchmark::DoNotOptimize(oneclass::log_gak(x, y, spec));
  state.SetComplexityN(len);
}
BENCHMARK(BM_LogGak)->ArgsProduct({{4, 9, 18, 34, 64}, {2, 1 << 30}})->Complexity();

void BM_Dtw(benchmark::State& state) {
  const auto len = state.range(0);
  const oneclass::Matrix m = random_rows(2, len);
  std::span<const double> x(m.row(0).data(), static_cast<std::size_t>(len));
  std::span<const double> y(m.row(1).data(), static_cast<std::size_t>(len));
  for (auto _ : state) benchmark::DoNotOptimize(oneclass::dtw(x, y));
}
BENCHMARK(BM_Dtw)->RangeMultiplier(2)->Range(4, 64);

void BM_TgakGram(benchmark::State& state) {
  const oneclass::Matrix m = random_rows(state.range(0), 9);
  const auto spec = oneclass::KernelSpec::tgak(1.0, 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(oneclass::gram(m, spec).data());
  state.counters["pairs/s"] = benchmark::Counter(
      static_cast<double>(state.range(0) * (state.range(0) + 1) / 2), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_TgakGram)->Arg(25)->Arg(229)->Unit(benchmark::kMillisecond);

void BM_RbfGram(benchmark::State& state) {
  const oneclass::Matrix m = random_rows(state.range(0), 9);
  for (auto _ : state) benchmark::DoNotOptimize(oneclass::gram(m, oneclass::KernelSpec::rbf(1.0)).data());
}
BENCHMARK(BM_RbfGram)->Arg(229)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
