#include "stopgrid/monte_carlo.hpp"
#include "stopgrid/pde.hpp"
#include "stopgrid/presets.hpp"
#include "stopgrid/rng.hpp"
#include "stopgrid/solver.hpp"

#include <benchmark/benchmark.h>

using namespace stopgrid;

namespace {

void BM_SolveSequence(benchmark::State& state) {
    const ModelParams p = base_params();
    const PiGrid grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sequence(p, grid, PdeConfig{}));
    }
}
BENCHMARK(BM_SolveSequence)->Arg(1001)->Arg(2001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_DiffuseExpectation(benchmark::State& state) {
    const DerivedParams d = derive_params(base_params());
    const PiGrid grid(static_cast<int>(state.range(0)));
    const GridFunction v = sample(grid, [&](double pi) { return v1_eval(pi, d); });
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            diffuse_expectation(v, 0.1, d, PdeConfig{}, 0.0, 1.0 - d.k));
    }
}
BENCHMARK(BM_DiffuseExpectation)->Arg(1001)->Arg(2001)->Arg(4001)
    ->Unit(benchmark::kMillisecond);

void BM_NormalDraw(benchmark::State& state) {
    Xoshiro256pp rng(1, 0);
    const ZigguratNormal normal;
    double acc = 0.0;
    for (auto _ : state) acc += normal(rng);
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NormalDraw);

void BM_BeliefStep(benchmark::State& state) {
    const DerivedParams d = derive_params(base_params());
    Xoshiro256pp rng(1, 0);
    const ZigguratNormal normal;
    double pi = 0.3;
    for (auto _ : state) {
        pi = step_belief(pi, 1e-3, d, normal(rng));
        benchmark::DoNotOptimize(pi);
    }
}
BENCHMARK(BM_BeliefStep);

void BM_SingleStop(benchmark::State& state) {
    const DerivedParams d = derive_params(base_params());
    const PiGrid grid(2001);
    const GridFunction payoff = sample(grid, [&](double pi) { return pi - d.k; });
    McConfig mc;
    mc.n_paths = state.range(0);
    mc.dt = 1e-3;
    mc.early_exit_cutoff = 1e-5;
    const double b1 = b1_closed_form(d);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_single_stop(0.3, b1, payoff, d, mc));
    }
    state.SetItemsProcessed(state.iterations() * mc.n_paths);
}
BENCHMARK(BM_SingleStop)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_FullStrategy(benchmark::State& state) {
    const ModelParams p = ModelParams::with_total_learning(-1, 1, 4, 0.1, 5, 1);
    const SolveResult res = solve_sequence(p, PiGrid(2001), PdeConfig{});
    std::vector<double> bounds;
    for (const auto& lvl : res.levels) bounds.push_back(lvl.b_n);
    McConfig mc;
    mc.n_paths = state.range(0);
    mc.dt = 1e-3;
    mc.early_exit_cutoff = 1e-5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_full_strategy(0.3, bounds, p, mc));
    }
    state.SetItemsProcessed(state.iterations() * mc.n_paths);
}
BENCHMARK(BM_FullStrategy)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
