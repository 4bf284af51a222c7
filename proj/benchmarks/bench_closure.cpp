#include "cva/conflicts.hpp"

#include <benchmark/benchmark.h>

using namespace cva;

namespace {

alphabet sized(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
  return alphabet(names);
}

void bench_conflict_closure(benchmark::State& state) {
  alphabet sigma = sized(static_cast<std::size_t>(state.range(0)));
  sync_set g(sigma, sigma.universe());
  std::vector<std::pair<action_id, action_id>> pairs;
  if (sigma.size() >= 2) pairs.emplace_back(0, 1);
  mutex_relation mx(sigma, pairs);
  // mutex actions would not normally live in G; the closure itself is
  // independent of that restriction
  for (auto _ : state) {
    auto rel = conflict_closure(sigma, g, mx);
    benchmark::DoNotOptimize(rel.members().size());
  }
}

}  // namespace

BENCHMARK(bench_conflict_closure)->Arg(1)->Arg(2)->Arg(3);
