#include "cva/strictness.hpp"

#include <benchmark/benchmark.h>

using namespace cva;

namespace {

alphabet sized(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
  return alphabet(names);
}

void bench_oracle_confirm(benchmark::State& state) {
  alphabet sigma = sized(static_cast<std::size_t>(state.range(0)));
  clause weak{modality::permission, party::p1, {0, false}};
  clause strict{modality::obligation, party::p1, {0, false}};
  sync_set g(sigma, sigma.universe());
  for (auto _ : state) {
    auto v = clause_stricter_semantic(weak, strict, sigma, g, {});
    benchmark::DoNotOptimize(v.relation);
  }
}

void bench_oracle_refute(benchmark::State& state) {
  alphabet sigma = sized(2);
  mutex_relation mx(sigma, {{0, 1}});
  clause weak{modality::permission, party::p2, {1, true}};
  clause strict{modality::permission, party::p1, {0, false}};
  sync_set g(sigma, with(0u, action_id{1}));
  for (auto _ : state) {
    auto v = clause_stricter_semantic(weak, strict, sigma, g, mx);
    benchmark::DoNotOptimize(v.forward.cex[0]);
  }
}

}  // namespace

BENCHMARK(bench_oracle_confirm)->Arg(1)->Arg(2)->Arg(3);
BENCHMARK(bench_oracle_refute);
