// Microbenchmarks for the hot paths: root finding, the two formula forms,
// dp evolution, the banded finite-adversary solve, and Monte Carlo paths.
#include <benchmark/benchmark.h>

#include <ruincalc/oracles.hpp>
#include <ruincalc/payoff.hpp>
#include <ruincalc/roots.hpp>
#include <ruincalc/ruin.hpp>

namespace {

using ruincalc::PayoffDistribution;

PayoffDistribution prize_game() {
    return PayoffDistribution::build(ruincalc::PoissonPrizeSpec{3, 0.01});
}

PayoffDistribution skip_walk() {
    ruincalc::TableSpec spec;
    spec.entries = {{-1, 0.3}, {2, 0.7}};
    return PayoffDistribution::build(spec);
}

void BM_FindDiskRoots(benchmark::State& state) {
    const auto d = prize_game();
    for (auto _ : state)
        benchmark::DoNotOptimize(ruincalc::find_disk_roots(d));
}
BENCHMARK(BM_FindDiskRoots);

void BM_WindingCount(benchmark::State& state) {
    const auto d = prize_game();
    for (auto _ : state)
        benchmark::DoNotOptimize(ruincalc::winding_root_count(d));
}
BENCHMARK(BM_WindingCount);

void BM_RuinLagrange(benchmark::State& state) {
    const auto d = prize_game();
    const auto roots = ruincalc::find_disk_roots(d);
    const int wealth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ruincalc::ruin_probability_lagrange(roots, wealth));
}
BENCHMARK(BM_RuinLagrange)->Arg(10)->Arg(500);

void BM_RuinNewton(benchmark::State& state) {
    const auto d = prize_game();
    const auto roots = ruincalc::find_disk_roots(d);
    const int wealth = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            ruincalc::ruin_probability_newton(roots, wealth));
}
BENCHMARK(BM_RuinNewton)->Arg(10)->Arg(500);

void BM_DpStep(benchmark::State& state) {
    const auto d = prize_game();
    auto w = ruincalc::WealthDistribution::point_mass(100, d.max_loss(), 2000);
    // Warm the window so every timed step convolves a full profile.
    for (int t = 0; t < 50; ++t)
        w = ruincalc::dp_step(w, d);
    for (auto _ : state) {
        w = ruincalc::dp_step(w, d);
        benchmark::DoNotOptimize(w.mass.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(w.mass.size()));
}
BENCHMARK(BM_DpStep);

void BM_FiniteW(benchmark::State& state) {
    const auto d = prize_game();
    const int W = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ruincalc::finite_w_ruin(d, 50, W));
}
BENCHMARK(BM_FiniteW)->Arg(500)->Arg(4000);

void BM_McPaths(benchmark::State& state) {
    const auto d = skip_walk();
    ruincalc::McOptions opt;
    opt.n_paths = state.range(0);
    opt.seed = 7;
    for (auto _ : state)
        benchmark::DoNotOptimize(ruincalc::mc_ruin(d, 10, opt));
    state.SetItemsProcessed(state.iterations() * opt.n_paths);
}
BENCHMARK(BM_McPaths)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
