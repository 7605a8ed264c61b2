// Microbenchmarks for the hot paths: the PF weight solver, one full stage of
// the game protocol, and a threshold-solver epoch.
#include <benchmark/benchmark.h>

#include <random>

#include "lspsim/game.hpp"

using namespace lsp;

namespace {

LinkRates random_rates(int users, int carriers, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> rate(1e5, 5e7);
    LinkRates rates{Matrix(users, carriers)};
    for (int u = 0; u < users; ++u)
        for (int k = 0; k < carriers; ++k) rates.c(u, k) = rate(gen);
    return rates;
}

void bench_pf_solver(benchmark::State& state) {
    const int users = static_cast<int>(state.range(0));
    const int carriers = static_cast<int>(state.range(1));
    const LinkRates rates = random_rates(users, carriers, 99);
    std::vector<int> everyone(users);
    for (int u = 0; u < users; ++u) everyone[u] = u;
    const std::vector<std::vector<int>> groups{everyone};
    for (auto _ : state) {
        benchmark::DoNotOptimize(optimize_weights(rates, groups));
    }
}
BENCHMARK(bench_pf_solver)->Args({5, 3})->Args({10, 3})->Args({10, 5})->Args({20, 5});

void bench_game_stage(benchmark::State& state) {
    GameParams params;
    params.radio.pool_size = static_cast<int>(state.range(0));
    params.threads = 1;
    const ScenarioSchedule schedule = ScenarioSchedule::equal(64, 7);
    const ThresholdSet thresholds = ThresholdSet::initial(params.radio.pool_size);
    int stage = 0;
    for (auto _ : state) {
        const NetworkSnapshot snap = make_stage_snapshot(schedule, stage, params);
        StageContext ctx(snap, params);
        const StageAction a = decide_action(ctx, Operator::A, thresholds);
        const StageAction b = decide_action(ctx, Operator::B, thresholds);
        benchmark::DoNotOptimize(resolve_stage(ctx, a, b, {thresholds, thresholds}));
        stage = (stage + 1) % schedule.stages();
    }
}
BENCHMARK(bench_game_stage)->Arg(2)->Arg(4);

void bench_threshold_solve(benchmark::State& state) {
    GameParams params;
    params.radio.pool_size = 2;
    params.threads = 1;
    const auto stores = run_initialization(2000, LoadDistribution{}, params, 3);
    OpponentStats stats;
    stats.p_ask = {0.2, 0.15};
    stats.p_grant = {0.4, 0.35};
    stats.ask_observations = {1000, 1000};
    stats.grant_observations = {1000, 1000};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_thresholds(stores[0], stats));
    }
}
BENCHMARK(bench_threshold_solve);

}  // namespace

BENCHMARK_MAIN();
