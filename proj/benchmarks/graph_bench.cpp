#include <benchmark/benchmark.h>

#include "beliefnet/experiments.hpp"
#include "beliefnet/social_graph.hpp"

using namespace beliefnet;

static void BM_TwoCommunity(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const auto m = static_cast<std::size_t>(state.range(1));
    Rng rng(4);
    for (auto _ : state) benchmark::DoNotOptimize(make_two_community(n, m, 0.2, rng));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}
BENCHMARK(BM_TwoCommunity)->Args({100, 1500})->Args({1000, 15000})->Args({10000, 150000});

static void BM_ModularityPopulation(benchmark::State& state) {
    Rng rng(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(experiments::modularity_population(100, 1500, 0.2, 0.09, rng));
}
BENCHMARK(BM_ModularityPopulation);

static void BM_Star(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(make_star(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Star)->Arg(40)->Arg(4000);
