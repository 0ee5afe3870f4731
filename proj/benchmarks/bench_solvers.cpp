#include <benchmark/benchmark.h>

#include <random>

#include "liqshock/schemes.hpp"
#include "liqshock/tridiag.hpp"

namespace {

using namespace liqshock;

void BM_TridiagonalSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(0.1, 1.0);
    TridiagonalSystem sys(n);
    for (std::size_t k = 0; k < n; ++k) {
        sys.lower[k] = d(rng);
        sys.upper[k] = d(rng);
        sys.diag[k] = sys.lower[k] + sys.upper[k] + d(rng);
        sys.rhs[k] = d(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(solve(sys));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TridiagonalSolve)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_SingleStep(benchmark::State& state, SchemeKind kind) {
    const ModelParams params;
    const auto coeffs = StepCoefficients::from(params, derive_constants(params));
    const auto grid = SpatialGrid::uniform(params.s_min, params.s_max, static_cast<int>(state.range(0)));
    const auto tg = time_grid_from_space(grid, params.horizon, TimeStepRule::half_min_spacing());
    SchemeConfig cfg;
    cfg.scheme = kind;
    cfg = resolve_config(cfg, params, grid);
    const auto s0 = initial_state(grid, params);
    for (auto _ : state) benchmark::DoNotOptimize(step(s0, grid, tg, coeffs, cfg));
}
BENCHMARK_CAPTURE(BM_SingleStep, scheme1, SchemeKind::imex_linear)->Arg(240)->Arg(960)->Arg(3840);
BENCHMARK_CAPTURE(BM_SingleStep, scheme2, SchemeKind::imex_linearized)->Arg(240)->Arg(960)->Arg(3840);

void BM_SolveForward(benchmark::State& state, SchemeKind kind) {
    const ModelParams params;
    const auto grid = SpatialGrid::uniform(params.s_min, params.s_max, static_cast<int>(state.range(0)));
    const auto tg = time_grid_from_space(grid, params.horizon, TimeStepRule::half_min_spacing());
    SchemeConfig cfg;
    cfg.scheme = kind;
    for (auto _ : state) benchmark::DoNotOptimize(solve_forward(params, grid, tg, cfg));
    state.counters["steps"] = tg.steps;
}
BENCHMARK_CAPTURE(BM_SolveForward, scheme1, SchemeKind::imex_linear)
    ->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveForward, scheme2, SchemeKind::imex_linearized)
    ->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
