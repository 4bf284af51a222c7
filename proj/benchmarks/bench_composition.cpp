#include "cva/composition.hpp"

#include <benchmark/benchmark.h>

using namespace cva;

namespace {

// Ring automata with n states: a synchronized step advances both parties, a
// local step advances one. State space of the product grows with n^2.
multi_action_automaton ring(const alphabet& sigma, std::size_t n, action_id step_action,
                            action_id local_action) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  std::vector<transition> edges;
  for (state_id q = 0; q < n; ++q) {
    edges.push_back({q, with(0u, step_action), static_cast<state_id>((q + 1) % n)});
    edges.push_back({q, with(0u, local_action), q});
    edges.push_back({q, 0, q});
  }
  return multi_action_automaton(sigma, names, names[0], edges);
}

void bench_sync_compose(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  alphabet sigma({"step", "l1", "l2"});
  sync_set g(sigma, with(0u, sigma.id("step")));
  auto s1 = ring(sigma, n, sigma.id("step"), sigma.id("l1"));
  auto s2 = ring(sigma, n, sigma.id("step"), sigma.id("l2"));
  for (auto _ : state) {
    auto composed = sync_compose(s1, s2, g);
    benchmark::DoNotOptimize(composed.state_count());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}

void bench_regulated_build(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  alphabet sigma({"step", "l1", "l2"});
  sync_set g(sigma, with(0u, sigma.id("step")));
  auto s1 = ring(sigma, n, sigma.id("step"), sigma.id("l1"));
  auto s2 = ring(sigma, n, sigma.id("step"), sigma.id("l2"));
  std::vector<std::vector<guard_arm>> arms(2);
  arms[0].push_back({guard::contains(sigma.id("step")), 1});
  arms[1].push_back({guard::contains(sigma.id("step")), 0});
  contract_automaton ca(sigma, {"c0", "c1"}, "c0", std::move(arms),
                        {{{modality::obligation, party::p1, {sigma.id("step"), false}}}, {}});
  for (auto _ : state) {
    auto r = build_regulated_system(s1, s2, g, ca);
    benchmark::DoNotOptimize(r.behaviour.transitions().size());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}

}  // namespace

BENCHMARK(bench_sync_compose)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Complexity();
BENCHMARK(bench_regulated_build)->Arg(4)->Arg(8)->Arg(16)->Complexity();
