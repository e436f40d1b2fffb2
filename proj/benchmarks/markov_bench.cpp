#include <benchmark/benchmark.h>

#include "beliefnet/markov.hpp"

using namespace beliefnet::markov;

static void BM_EnumerateStates(benchmark::State& state) {
    const auto sc = star_scenario(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_states(sc.hub_initial, sc.senders(), Rational(3, 2), 1));
}
BENCHMARK(BM_EnumerateStates)->Arg(1)->Arg(2);

static void BM_BuildTransitionMatrix(benchmark::State& state) {
    const auto sc = star_scenario(static_cast<int>(state.range(0)));
    const auto states = enumerate_states(sc.hub_initial, sc.senders(), Rational(3, 2), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_transition_matrix(states, sc.senders(), Rational(3, 2), 1));
}
BENCHMARK(BM_BuildTransitionMatrix)->Arg(1)->Arg(2);

static void BM_AnalyticalCurve(benchmark::State& state) {
    const auto sc = star_scenario(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(analytical_curve(sc, 39, Rational(3, 2), 1));
}
BENCHMARK(BM_AnalyticalCurve)->Arg(1)->Arg(2);
