#include <benchmark/benchmark.h>

#include "splitsurf/census.hpp"
#include "splitsurf/driver.hpp"

using namespace splitsurf;

static void BM_HistogramSerial(benchmark::State& state) {
  const auto q = static_cast<genus2::u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(genus2::model_histogram_serial(q));
}
BENCHMARK(BM_HistogramSerial)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);

static void BM_HistogramParallel(benchmark::State& state) {
  const auto q = static_cast<genus2::u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(genus2::model_histogram_parallel(q));
}
BENCHMARK(BM_HistogramParallel)->Arg(11)->Arg(13)->Unit(benchmark::kMillisecond);

static void BM_PisplitSerial(benchmark::State& state) {
  const auto C = driver::RationalGenus2::parse("x^5+x+6");
  for (auto _ : state) benchmark::DoNotOptimize(driver::pisplit_serial(C, static_cast<driver::u64>(state.range(0))));
}
BENCHMARK(BM_PisplitSerial)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_PisplitParallel(benchmark::State& state) {
  const auto C = driver::RationalGenus2::parse("x^5+x+6");
  for (auto _ : state) benchmark::DoNotOptimize(driver::pisplit(C, static_cast<driver::u64>(state.range(0))));
}
BENCHMARK(BM_PisplitParallel)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_MonteCarlo(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(genus2::monte_carlo_cq(1031, 4096, 1, threads));
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
