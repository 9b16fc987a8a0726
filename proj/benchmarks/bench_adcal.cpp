#include <benchmark/benchmark.h>

#include "adcal/calibrate.hpp"
#include "adcal/empirical.hpp"
#include "adcal/generators.hpp"
#include "adcal/optimize.hpp"
#include "adcal/properties.hpp"
#include "adcal/selection.hpp"

namespace {

using namespace adcal;

void BM_ShowDistribution(benchmark::State& state) {
  RandomSpec spec;
  spec.queries = static_cast<std::size_t>(state.range(0));
  spec.max_ads_per_query = 5;
  spec.buckets = 4;
  spec.mechanism = Mechanism::kOne;
  const auto inst = random_instance(spec);
  const auto f = PredictionMap::parse("1/2,1/3,1/4,1/5");
  for (auto _ : state) benchmark::DoNotOptimize(show_distribution(inst, f));
}
BENCHMARK(BM_ShowDistribution)->Arg(10)->Arg(100)->Arg(1000);

void BM_IterateT(benchmark::State& state) {
  const auto inst = all_three_class(static_cast<std::size_t>(state.range(0)));
  const auto f0 = PredictionMap::parse("1");
  for (auto _ : state) benchmark::DoNotOptimize(iterate_t(inst, f0, 100));
}
BENCHMARK(BM_IterateT)->Arg(10)->Arg(100);

void BM_EnumerateFixedPointsOne(benchmark::State& state) {
  const auto inst = one_exponential(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_fixed_points(inst, 1 << 12));
}
BENCHMARK(BM_EnumerateFixedPointsOne)->DenseRange(2, 6, 2);

void BM_OptimalMapOneMfas(benchmark::State& state) {
  const auto inst =
      mfas_to_instance(Tournament::random(static_cast<std::size_t>(state.range(0)), 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_map_one_exact(inst, kDefaultConfigBudget));
  }
}
BENCHMARK(BM_OptimalMapOneMfas)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_MfasExact(benchmark::State& state) {
  const auto t = Tournament::random(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(mfas_exact(t));
}
BENCHMARK(BM_MfasExact)->DenseRange(4, 8, 2);

void BM_CheckSiAll(benchmark::State& state) {
  RandomSpec spec;
  spec.queries = static_cast<std::size_t>(state.range(0));
  spec.buckets = 3;
  const auto inst = random_instance(spec);
  for (auto _ : state) benchmark::DoNotOptimize(check_si(inst));
}
BENCHMARK(BM_CheckSiAll)->Arg(10)->Arg(100);

void BM_SimulateBatch(benchmark::State& state) {
  const auto inst = paper_fixture("fig1_many_fixed_points");
  const auto f = PredictionMap::parse("1/4");
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_batch(inst, f, n, 1));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_SimulateBatch)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
