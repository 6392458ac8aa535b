// Serial reference against the OpenMP kernel for each parallel code path.

#include <benchmark/benchmark.h>

#include "runsdist/catalog.hpp"
#include "runsdist/moments.hpp"
#include "runsdist/oracle.hpp"

using namespace runsdist;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_NestedSumExactRange(benchmark::State& state) {
  const RunParams<Rational> params(3, 4, Rational(1, 4));
  for (auto _ : state) {
    auto t = evaluate_range("nested-sum", params, VariantSpec::type_one(), IndexScheme::Full, 1, 200,
                            {mode(state), -1});
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_NestedSumExactRange)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FullSumRange(benchmark::State& state) {
  const RunParams<double> params(4, 4, 0.5);
  for (auto _ : state) {
    auto t = evaluate_range("fullsum-ch", params, VariantSpec::type_one(), IndexScheme::Full, 1, 400,
                            {mode(state), -1});
    benchmark::DoNotOptimize(t.values.data());
  }
}
BENCHMARK(BM_FullSumRange)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PgfMoments(benchmark::State& state) {
  const RunParams<double> params(3, 3, 0.5);
  PgfMomentOptions opts;
  opts.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(factorial_moments_pgf(params, 5, opts).values.data());
}
BENCHMARK(BM_PgfMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const RunParams<double> params(2, 2, 0.5);
  for (auto _ : state) {
    auto mc = monte_carlo(params, CountingSemantics::type_one(), 200000, 7, mode(state));
    benchmark::DoNotOptimize(mc.mean);
  }
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
