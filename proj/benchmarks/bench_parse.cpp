#include "synthetic.hpp"

#include "pbtk/pbformat.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

std::string make_file(std::size_t voters, std::size_t projects) {
  std::mt19937_64 rng(3);
  std::string text = "META\nkey; value\ndescription; synthetic\ncountry; Poland\nunit; Bench\ninstance; 2024\n";
  text += "num_projects; " + std::to_string(projects) + "\nnum_votes; " + std::to_string(voters) +
          "\nbudget; 100000\nvote_type; approval\nrule; greedy\nPROJECTS\nproject_id; cost; category\n";
  for (std::size_t p = 1; p <= projects; ++p) text += std::to_string(p) + "; " + std::to_string(100 + p) + "; sport\n";
  text += "VOTES\nvoter_id; vote\n";
  std::uniform_int_distribution<std::size_t> pick(1, projects);
  for (std::size_t i = 0; i < voters; ++i) {
    text += std::to_string(i) + "; " + std::to_string(pick(rng)) + "," + std::to_string(pick(rng) % projects + 1) + "\n";
  }
  return text;
}

void BM_ParsePb(benchmark::State& state) {
  const auto text = make_file(static_cast<std::size_t>(state.range(0)), 60);
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::parse_pb(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}

void BM_Serialize(benchmark::State& state) {
  const auto file = pbtk::parse_pb(make_file(static_cast<std::size_t>(state.range(0)), 60));
  for (auto _ : state) benchmark::DoNotOptimize(pbtk::serialize(file));
}

}  // namespace

BENCHMARK(BM_ParsePb)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Serialize)->Arg(10000)->Unit(benchmark::kMillisecond);
