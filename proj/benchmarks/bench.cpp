#include <benchmark/benchmark.h>

#include "perfmm/harness.hpp"
#include "perfmm/strategies.hpp"

using namespace perfmm;

static void BM_DeltaXi(benchmark::State& state) {
    double tau = 0.0;
    for (auto _ : state) {
        tau += 1e-6;
        benchmark::DoNotOptimize(delta_xi(5.0, tau));
    }
}
BENCHMARK(BM_DeltaXi);

static void BM_EulerStep(benchmark::State& state) {
    const ProcessParams p{5.0, 0.5, 2.0, 1.0, 0.005, 1.0};
    PathState s{0, 1.0, 2};
    for (auto _ : state) {
        s = euler_step(s, p, 0.1);
        s.step = 0;  // stay on the grid
        benchmark::DoNotOptimize(s.mid_price);
    }
}
BENCHMARK(BM_EulerStep);

static void BM_ExactStep(benchmark::State& state) {
    const ProcessParams p{5.0, 0.5, 2.0, 1.0, 0.005, 1.0};
    PathState s{0, 1.0, 2};
    for (auto _ : state) {
        s = exact_step(s, p, 0.1);
        s.step = 0;
        benchmark::DoNotOptimize(s.mid_price);
    }
}
BENCHMARK(BM_ExactStep);

static void BM_PerformativeQuotes(benchmark::State& state) {
    double tau = 1.0;
    for (auto _ : state) {
        tau = tau <= 0.005 ? 1.0 : tau - 0.005;
        benchmark::DoNotOptimize(performative_quotes(0.8, 2, -1, 10.0, 0.5, 2.0, 1.5, tau));
    }
}
BENCHMARK(BM_PerformativeQuotes);

static void BM_RunPath(benchmark::State& state) {
    CellConfig cell;
    cell.xi = 10.0;
    std::uint64_t path = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_path(cell, path++));
    }
}
BENCHMARK(BM_RunPath);

static void BM_RunCell(benchmark::State& state) {
    CellConfig cell;
    cell.xi = 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_cell(cell, static_cast<int>(state.range(0)), 1));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RunCell)->Arg(16)->Arg(64)->Arg(256)->Complexity();

BENCHMARK_MAIN();
