// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "wl1/models.hpp"
#include "wl1/operators.hpp"
#include "wl1/rip.hpp"

namespace {

void rip_args(benchmark::internal::Benchmark* b) {
  b->Args({16, 4})->Args({18, 5})->Unit(benchmark::kMillisecond);
}

void BM_RipSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto op = wl1::gaussian_operator(n - 2, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wl1::exhaustive_rip_serial(op, static_cast<std::size_t>(state.range(1))));
}
BENCHMARK(BM_RipSerial)->Apply(rip_args);

void BM_RipOpenMP(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto op = wl1::gaussian_operator(n - 2, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(wl1::exhaustive_rip(op, static_cast<std::size_t>(state.range(1))));
  state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_RipOpenMP)->Apply(rip_args);

void BM_TreeSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(wl1::tree_frequencies_serial(256, 24, 10000, 1));
}
BENCHMARK(BM_TreeSerial)->Unit(benchmark::kMillisecond);

void BM_TreeOpenMP(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(wl1::tree_frequencies(256, 24, 10000, 1));
  state.counters["threads"] = omp_get_max_threads();
}
BENCHMARK(BM_TreeOpenMP)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
