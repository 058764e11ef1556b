#include "synthetic.hpp"

#include "pbtk/metrics.hpp"
#include "pbtk/rules.hpp"

#include <benchmark/benchmark.h>

namespace {

void run(benchmark::State& state, const char* rule) {
  const auto e = bench::make_election(static_cast<std::size_t>(state.range(0)),
                                      static_cast<std::size_t>(state.range(1)), 0.1, 42);
  const auto spec = pbtk::RuleSpec::parse(rule);
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::run_rule(e, spec));
  state.counters["voters"] = static_cast<double>(e.num_voters());
  state.counters["projects"] = static_cast<double>(e.num_projects());
}

void BM_UtilitarianGreedy(benchmark::State& state) { run(state, "ug-cost"); }
void BM_EqualShares(benchmark::State& state) { run(state, "mes-cost"); }
void BM_EqualSharesAdd1U(benchmark::State& state) { run(state, "mes-cost-add1u"); }

void BM_PowerInequality(benchmark::State& state) {
  const auto e = bench::make_election(static_cast<std::size_t>(state.range(0)),
                                      static_cast<std::size_t>(state.range(1)), 0.1, 7);
  const auto w = pbtk::run_rule(e, pbtk::RuleSpec::parse("ug-cost")).selected;
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::power_inequality(e, w));
}

}  // namespace

BENCHMARK(BM_UtilitarianGreedy)->Args({1000, 50})->Args({10000, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EqualShares)->Args({1000, 50})->Args({10000, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EqualSharesAdd1U)->Args({200, 20})->Args({1000, 40})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PowerInequality)->Args({10000, 100})->Unit(benchmark::kMillisecond);
