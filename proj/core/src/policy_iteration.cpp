#include "pia/policy_iteration.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace pia {

namespace {

ScalarField boundary_field(const ControlProblem& problem, const Grid2D& grid) {
    ScalarField b(grid);
    for (int k = 0; k < grid.n; ++k)
        for (int j = 0; j < grid.n; ++j)
            if (grid.is_boundary(j, k)) b(j, k) = problem.boundary_payoff(grid.node(j, k));
    return b;
}

}  // namespace

PolicyField policy_update(const ControlProblem& problem, const ScalarField& v, const Grid2D& grid) {
    if (v.grid() != grid) throw std::invalid_argument("grid-mismatch: value field does not match grid");
    const auto [vx, vy] = central_gradient(v);
    PolicyField pi(grid, problem.action_dim);
    for (int k = 1; k < grid.n - 1; ++k)
        for (int j = 1; j < grid.n - 1; ++j)
            pi.set(j, k, greedy_policy(problem, {vx(j, k), vy(j, k)}, grid.node(j, k)));
    return pi;
}

PiaResult run_pia(const ControlProblem& problem, const Grid2D& grid, const PiaConfig& config) {
    if (!(config.tol1 > 0.0) || !(config.tol2 > 0.0) || config.max_pia_steps < 1)
        throw std::invalid_argument("PiaConfig: tol1 > 0, tol2 > 0 and max_pia_steps >= 1 required");

    const ScalarField dirichlet = boundary_field(problem, grid);

    PiaResult result;
    result.v = ScalarField(grid);                       // V0 = 0
    result.policy = PolicyField(grid, problem.action_dim);  // pi_0 = 0

    PolicyField pi_current = result.policy;
    ScalarField v_prev;  // previous converged value iterate, for W_i
    bool have_prev = false;

    for (int step = 0; step < config.max_pia_steps; ++step) {
        const auto t0 = std::chrono::steady_clock::now();

        const StencilSystem stencil = assemble_stencil(problem, grid, pi_current);
        const DominanceReport dom = check_diagonal_dominance(stencil);

        auto [v, stats] = iterative_solve(stencil, dirichlet, result.v, config.tol1,
                                          config.scheme, config.max_sweeps);
        if (!stats.converged)
            throw std::runtime_error("inner-solver non-convergence at PIA step " + std::to_string(step) +
                                     " after " + std::to_string(stats.sweeps) + " sweeps");

        IterationRecord rec;
        rec.step = step;
        rec.point_updates = stats.point_updates;
        rec.dominance_holds = dom.holds;
        rec.dominance_margin = dom.worst_margin;
        if (have_prev) {
            ScalarField w(grid);
            for (std::size_t i = 0; i < w.values().size(); ++i)
                w.values()[i] = v.values()[i] - v_prev.values()[i];
            rec.max_dv = sup_norm_diff(v, v_prev);
            result.w_fields.push_back(std::move(w));
        }

        PolicyField pi_next = policy_update(problem, v, grid);
        rec.max_dpi = max_policy_diff(pi_next, pi_current);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        result.records.push_back(rec);
        result.policies.push_back(pi_next);

        v_prev = v;
        have_prev = true;
        result.v = std::move(v);
        result.policy = pi_next;
        pi_current = std::move(pi_next);

        if (rec.max_dpi < config.tol2) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::pair<ScalarField, SolveStats> solve_linear_baseline(
    const ControlProblem& problem, const Grid2D& grid, double tol1, Scheme scheme,
    std::int64_t max_sweeps, const std::function<void(std::int64_t, double)>& on_sweep) {
    const PolicyField zero_policy(grid, problem.action_dim);
    const StencilSystem stencil = assemble_stencil(problem, grid, zero_policy);
    return iterative_solve(stencil, boundary_field(problem, grid), ScalarField(grid), tol1, scheme,
                           max_sweeps, on_sweep);
}

}  // namespace pia
