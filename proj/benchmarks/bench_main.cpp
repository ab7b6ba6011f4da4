#include <benchmark/benchmark.h>

#include "pia/analysis.hpp"
#include "pia/mc_oracle.hpp"
#include "pia/policy_iteration.hpp"

using namespace pia;

namespace {

ControlProblem reference_problem() { return make_example_problem(2.0, 0.2, 0.03, 0.5, 2.0, 0.5, 2.0); }

}  // namespace

static void BM_AssembleStencil(benchmark::State& state) {
    const auto p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, static_cast<int>(state.range(0)));
    const PolicyField pi(g, 1);
    for (auto _ : state) {
        auto s = assemble_stencil(p, g, pi);
        benchmark::DoNotOptimize(s.p_center.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.interior_count()));
}
BENCHMARK(BM_AssembleStencil)->Arg(100)->Arg(199);

static void BM_GaussSeidelSweeps(benchmark::State& state) {
    const auto p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, static_cast<int>(state.range(0)));
    const StencilSystem s = assemble_stencil(p, g, PolicyField(g, 1));
    const ScalarField zero(g);
    constexpr std::int64_t kSweeps = 50;
    for (auto _ : state) {
        // fixed sweep budget; tolerance set unreachably low
        auto [v, stats] = iterative_solve(s, zero, zero, 1e-300, Scheme::gauss_seidel, kSweeps);
        benchmark::DoNotOptimize(v.values().data());
    }
    state.SetItemsProcessed(state.iterations() * kSweeps *
                            static_cast<std::int64_t>(g.interior_count()));
}
BENCHMARK(BM_GaussSeidelSweeps)->Arg(100)->Arg(199);

static void BM_JacobiSweeps(benchmark::State& state) {
    const auto p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, static_cast<int>(state.range(0)));
    const StencilSystem s = assemble_stencil(p, g, PolicyField(g, 1));
    const ScalarField zero(g);
    constexpr std::int64_t kSweeps = 50;
    for (auto _ : state) {
        auto [v, stats] = iterative_solve(s, zero, zero, 1e-300, Scheme::jacobi, kSweeps);
        benchmark::DoNotOptimize(v.values().data());
    }
    state.SetItemsProcessed(state.iterations() * kSweeps *
                            static_cast<std::int64_t>(g.interior_count()));
}
BENCHMARK(BM_JacobiSweeps)->Arg(100);

static void BM_PolicyUpdate(benchmark::State& state) {
    const auto p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, 100);
    ScalarField v(g);
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j) v(j, k) = 0.1 * g.x(j) * g.y(k);
    for (auto _ : state) {
        auto pi = policy_update(p, v, g);
        benchmark::DoNotOptimize(pi.component(1, 1, 0));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.interior_count()));
}
BENCHMARK(BM_PolicyUpdate);

static void BM_PiaSmallGrid(benchmark::State& state) {
    const auto p = reference_problem();
    const Grid2D g = build_grid(0.5, 2.0, 0.5, 2.0, 20);
    for (auto _ : state) {
        auto r = run_pia(p, g, {});
        benchmark::DoNotOptimize(r.records.size());
    }
}
BENCHMARK(BM_PiaSmallGrid);

static void BM_McPaths(benchmark::State& state) {
    const auto p = reference_problem();
    McConfig cfg;
    cfg.n_paths = state.range(0);
    cfg.dt = 1e-3;
    cfg.seed = 3;
    cfg.max_time = 200.0;
    for (auto _ : state) {
        auto est = estimate_value(p, Action{0.0}, {1.25, 1.25}, cfg, 1);
        benchmark::DoNotOptimize(est.mean);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_paths);
}
BENCHMARK(BM_McPaths)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
