#include "pia/fdm_solver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace pia {

StencilSystem assemble_stencil(const ControlProblem& problem, const Grid2D& grid,
                               const PolicyField& policy) {
    if (policy.grid() != grid)
        throw std::invalid_argument("grid-mismatch: policy does not live on the target grid");
    StencilSystem s;
    s.grid = grid;
    const std::size_t m = grid.interior_count();
    s.p_east.resize(m);
    s.p_west.resize(m);
    s.p_north.resize(m);
    s.p_south.resize(m);
    s.p_center.resize(m);
    s.q.resize(m);

    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double inv_dy2 = 1.0 / (grid.dy * grid.dy);
    const double inv_2dx = 1.0 / (2.0 * grid.dx);
    const double inv_2dy = 1.0 / (2.0 * grid.dy);

    std::size_t i = 0;
    for (int k = 1; k < grid.n - 1; ++k) {
        for (int j = 1; j < grid.n - 1; ++j, ++i) {
            const Vec2 z = grid.node(j, k);
            const Action pi = policy.at(j, k);
            const auto a = problem.diffusion_quadratic(z);
            const Vec2 mu = problem.drift(z, pi);
            s.p_east[i] = a[0] * inv_dx2 + mu.x * inv_2dx;
            s.p_west[i] = a[0] * inv_dx2 - mu.x * inv_2dx;
            s.p_north[i] = a[1] * inv_dy2 + mu.y * inv_2dy;
            s.p_south[i] = a[1] * inv_dy2 - mu.y * inv_2dy;
            s.p_center[i] = -(2.0 * a[0] * inv_dx2 + 2.0 * a[1] * inv_dy2 + problem.discount);
            s.q[i] = problem.reward.value(z, pi);
        }
    }
    return s;
}

DominanceReport check_diagonal_dominance(const StencilSystem& s) {
    DominanceReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    for (int k = 1; k < s.grid.n - 1; ++k) {
        for (int j = 1; j < s.grid.n - 1; ++j, ++i) {
            const double margin = std::abs(s.p_center[i]) -
                                  (std::abs(s.p_east[i]) + std::abs(s.p_west[i]) +
                                   std::abs(s.p_north[i]) + std::abs(s.p_south[i]));
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.worst_j = j;
                rep.worst_k = k;
            }
        }
    }
    rep.holds = rep.worst_margin > 0.0;
    return rep;
}

double equation_residual(const StencilSystem& s, const ScalarField& v, const ScalarField* source) {
    if (v.grid() != s.grid) throw std::invalid_argument("grid-mismatch: field does not match the stencil grid");
    if (source && source->grid() != s.grid)
        throw std::invalid_argument("grid-mismatch: source does not match the stencil grid");
    double worst = 0.0;
    std::size_t i = 0;
    for (int k = 1; k < s.grid.n - 1; ++k) {
        for (int j = 1; j < s.grid.n - 1; ++j, ++i) {
            const double src = source ? (*source)(j, k) : s.q[i];
            const double r = s.p_center[i] * v(j, k) + s.p_east[i] * v(j + 1, k) +
                             s.p_west[i] * v(j - 1, k) + s.p_north[i] * v(j, k + 1) +
                             s.p_south[i] * v(j, k - 1) + src;
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

std::pair<ScalarField, SolveStats> iterative_solve(
    const StencilSystem& s, const ScalarField& boundary, const ScalarField& v0,
    double tol1, Scheme scheme, std::int64_t max_sweeps,
    const std::function<void(std::int64_t, double)>& on_sweep) {
    const Grid2D& g = s.grid;
    if (boundary.grid() != g || v0.grid() != g)
        throw std::invalid_argument("grid-mismatch: boundary/initial fields do not match the stencil grid");
    if (!(tol1 > 0.0)) throw std::invalid_argument("tol1 must be positive");
    for (double pc : s.p_center)
        if (pc == 0.0) throw std::domain_error("zero-center-coefficient: p_center vanishes at an interior node");

    ScalarField v = v0;
    for (int k = 0; k < g.n; ++k) {
        for (int j = 0; j < g.n; ++j)
            if (g.is_boundary(j, k)) v(j, k) = boundary(j, k);
    }

    ScalarField prev = v;  // Jacobi scratch
    SolveStats stats;
    const std::int64_t interior = static_cast<std::int64_t>(g.interior_count());

    while (stats.sweeps < max_sweeps) {
        double max_diff = 0.0;
        if (scheme == Scheme::jacobi) prev = v;
        const ScalarField& read = (scheme == Scheme::jacobi) ? prev : v;

        std::size_t i = 0;
        for (int k = 1; k < g.n - 1; ++k) {
            for (int j = 1; j < g.n - 1; ++j, ++i) {
                const double next = -(s.p_east[i] * read(j + 1, k) + s.p_west[i] * read(j - 1, k) +
                                      s.p_north[i] * read(j, k + 1) + s.p_south[i] * read(j, k - 1) +
                                      s.q[i]) /
                                    s.p_center[i];
                max_diff = std::max(max_diff, std::abs(next - read(j, k)));
                v(j, k) = next;
            }
        }
        ++stats.sweeps;
        stats.point_updates += interior;
        if (on_sweep) on_sweep(stats.sweeps, max_diff);
        if (max_diff < tol1) {
            stats.converged = true;
            break;
        }
    }
    stats.final_residual = equation_residual(s, v);
    return {std::move(v), stats};
}

std::function<void(std::int64_t, double)> sweep_trace_to_csv(std::ostream& os) {
    os << "sweep,max_diff\n";
    return [&os](std::int64_t sweep, double max_diff) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%lld,%.12g\n", static_cast<long long>(sweep), max_diff);
        os << buf;
    };
}

}  // namespace pia
