// Five-point stencil assembly for the policy-frozen linear elliptic PDE and
// iterative solution by Gauss-Seidel or Jacobi sweeps.
//
// At interior node (j,k), with a_x, a_y the diagonal of (1/2) sigma sigma'
// and mu = M(x) pi + b(x):
//   p_east   =  a_x/dx^2 + mu_x/(2 dx)
//   p_west   =  a_x/dx^2 - mu_x/(2 dx)
//   p_north  =  a_y/dy^2 + mu_y/(2 dy)
//   p_south  =  a_y/dy^2 - mu_y/(2 dy)
//   p_center = -(2 a_x/dx^2 + 2 a_y/dy^2 + alpha)
//   q        =  f_pi(x)
// and the discrete equation is
//   p_e V_E + p_w V_W + p_n V_N + p_s V_S + p_c V_C + q = 0.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pia/grid.hpp"
#include "pia/problem.hpp"

namespace pia {

enum class Scheme { gauss_seidel, jacobi };

struct StencilSystem {
    Grid2D grid;
    // One entry per interior node, storage order matching the sweep order.
    std::vector<double> p_east, p_west, p_north, p_south, p_center, q;

    std::size_t interior_index(int j, int k) const {
        return static_cast<std::size_t>(k - 1) * (grid.n - 2) + (j - 1);
    }
};

struct SolveStats {
    std::int64_t sweeps = 0;
    std::int64_t point_updates = 0;  // sweeps * interior node count
    double final_residual = 0.0;     // max interior |p_c V + sum p_nb V_nb + q|
    bool converged = false;
};

struct DominanceReport {
    bool holds = false;
    int worst_j = 0;
    int worst_k = 0;
    double worst_margin = 0.0;  // min over nodes of |p_center| - sum |neighbors|
};

StencilSystem assemble_stencil(const ControlProblem& problem, const Grid2D& grid,
                               const PolicyField& policy);

DominanceReport check_diagonal_dominance(const StencilSystem& s);

// max over interior nodes of |p_c V + p_e V_E + p_w V_W + p_n V_N + p_s V_S + source|.
// Pass a null source to use the stencil's own q.
double equation_residual(const StencilSystem& s, const ScalarField& v,
                         const ScalarField* source = nullptr);

// Sweeps until the sup-norm difference between consecutive iterates drops
// below tol1. Boundary nodes carry the Dirichlet data from `boundary`
// unchanged. Gauss-Seidel updates in place in storage order (j fastest);
// Jacobi reads only previous-sweep values. On sweep exhaustion the best
// iterate is returned with stats.converged == false.
std::pair<ScalarField, SolveStats> iterative_solve(
    const StencilSystem& s, const ScalarField& boundary, const ScalarField& v0,
    double tol1, Scheme scheme, std::int64_t max_sweeps = 1'000'000,
    const std::function<void(std::int64_t sweep, double max_diff)>& on_sweep = {});

// Per-sweep trace sink writing `sweep,max_diff` rows (header emitted up front).
std::function<void(std::int64_t, double)> sweep_trace_to_csv(std::ostream& os);

}  // namespace pia
