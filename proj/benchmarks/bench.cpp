#include <benchmark/benchmark.h>

#include <complex>

#include "tumor_dde/equilibria.hpp"
#include "tumor_dde/integrator.hpp"
#include "tumor_dde/linear_stability.hpp"
#include "tumor_dde/model.hpp"
#include "tumor_dde/switching_curves.hpp"

using namespace tumor_dde;

namespace {

ModelParams hopf_params(double tau1 = 0.0, double tau2 = 0.0) {
    return ModelParams::make(1.0, 1.0, 0.2, 1.0, 0.1, 1.0, 3.0, 1.0, 1.0, 0.0, tau1, tau2);
}

CharacteristicContext hopf_ctx() {
    const ModelParams p = hopf_params();
    return characteristic_context(p, interior_equilibrium(ScaledParams::from(p)));
}

}  // namespace

static void BM_SolveTriangleThreeRoots(benchmark::State& state) {
    const CriticalConstants cc = critical_constants(0.8, 0.5, 5.5);
    const HContext ctx{5.5, 0.8, 0.5, 0.5 * (cc.H_R + cc.H_L)};
    for (auto _ : state) {
        auto roots = solve_triangle(ctx);
        benchmark::DoNotOptimize(roots);
    }
}
BENCHMARK(BM_SolveTriangleThreeRoots);

static void BM_CriticalConstants(benchmark::State& state) {
    for (auto _ : state) {
        auto cc = critical_constants(0.8, 0.5, 6.0);
        benchmark::DoNotOptimize(cc);
    }
}
BENCHMARK(BM_CriticalConstants);

static void BM_InteriorEquilibrium(benchmark::State& state) {
    const ScaledParams sp = ScaledParams::from(hopf_params());
    for (auto _ : state) {
        auto eq = interior_equilibrium(sp);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_InteriorEquilibrium);

static void BM_CharEval(benchmark::State& state) {
    const CharacteristicContext ctx = hopf_ctx();
    const cplx lam(0.02, 0.47);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ctx.eval(lam, 2.4, 2.4));
    }
}
BENCHMARK(BM_CharEval);

static void BM_TauCritical(benchmark::State& state) {
    const CharacteristicContext ctx = hopf_ctx();
    for (auto _ : state) {
        auto tc = tau_critical(ctx);
        benchmark::DoNotOptimize(tc);
    }
}
BENCHMARK(BM_TauCritical);

static void BM_RhpRootCount(benchmark::State& state) {
    const CharacteristicContext ctx = hopf_ctx();
    const TauCritical tc = tau_critical(ctx);
    const ContourBox box = default_counting_box(ctx);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhp_root_count(ctx, tc.tau_c + 1e-3, tc.tau_c + 1e-3, box));
    }
}
BENCHMARK(BM_RhpRootCount);

static void BM_FeasibleSet(benchmark::State& state) {
    const CharacteristicContext ctx = hopf_ctx();
    const auto grid = default_y_grid(ctx, 2048);
    for (auto _ : state) {
        auto intervals = feasible_set(ctx, grid);
        benchmark::DoNotOptimize(intervals);
    }
}
BENCHMARK(BM_FeasibleSet);

static void BM_IntegrateDelayed(benchmark::State& state) {
    const double tau = 2.0;
    const ModelParams p = hopf_params(tau, tau);
    const HistorySegment hist = HistorySegment::constant({0.3, 0.25}, -tau);
    const double h = tau / 128.0;
    const double t_end = 50.0;
    std::size_t steps = 0;
    for (auto _ : state) {
        const Trajectory traj = integrate_autonomous(p, hist, t_end, h);
        steps += traj.t.size() - 1;
        benchmark::DoNotOptimize(traj.x.back());
    }
    state.SetItemsProcessed(static_cast<int64_t>(steps));
}
BENCHMARK(BM_IntegrateDelayed);

BENCHMARK_MAIN();
