#include "synthetic.hpp"

#include "pbtk/geometry.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_JaccardMatrix(benchmark::State& state) {
  const auto e = bench::make_election(5000, static_cast<std::size_t>(state.range(0)), 0.1, 11);
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::jaccard_matrix(e));
}

void BM_Smacof(benchmark::State& state) {
  const auto e = bench::make_election(2000, static_cast<std::size_t>(state.range(0)), 0.15, 5);
  const auto dm = pbtk::normalize_distances(pbtk::jaccard_matrix(e).matrix);
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::mds_embed(dm, {.seed = 1}));
}

}  // namespace

BENCHMARK(BM_JaccardMatrix)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Smacof)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);
