// The outer policy improvement loop: alternate frozen-policy linear solves
// with greedy policy updates until the policy stabilizes.
//
// Step indexing matches the convergence table it reproduces: record i holds
// the differences produced by the (i+1)-th solve, so record 0 has no value
// difference (there is no previous value iterate) and max_dv is absent there.
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "pia/fdm_solver.hpp"
#include "pia/grid.hpp"
#include "pia/problem.hpp"

namespace pia {

struct PiaConfig {
    double tol1 = 1e-5;               // inner sup-norm tolerance on iterate differences
    double tol2 = 1e-3;               // stopping tolerance on policy differences
    int max_pia_steps = 50;
    Scheme scheme = Scheme::gauss_seidel;
    std::int64_t max_sweeps = 1'000'000;
};

struct IterationRecord {
    int step = 0;
    double max_dpi = 0.0;                 // max |pi_{i+1} - pi_i|
    std::optional<double> max_dv;         // max |V^{pi_i} - V^{pi_{i-1}}|; absent on step 0
    std::int64_t point_updates = 0;
    double wall_ms = 0.0;
    bool dominance_holds = true;          // diagonal dominance of this step's stencil
    double dominance_margin = 0.0;
};

struct PiaResult {
    ScalarField v;                        // last value iterate
    PolicyField policy;                   // last policy produced
    std::vector<IterationRecord> records;
    std::vector<ScalarField> w_fields;    // W_i = V^{pi_{i+1}} - V^{pi_i}, i = 0..
    std::vector<PolicyField> policies;    // pi_1, pi_2, ... (pi_0 == 0 implicit)
    bool converged = false;               // false iff max_pia_steps was hit
};

// Greedy update: central differences of v fed through the closed-form argmax
// at every interior node.
PolicyField policy_update(const ControlProblem& problem, const ScalarField& v, const Grid2D& grid);

// Runs the full loop: V0 = 0 and pi_0 = 0, then solve / improve until
// max |pi_{i+1} - pi_i| < tol2. Each inner solve warm-starts from the
// previous value iterate. Diagonal dominance is checked before every solve
// and recorded (a violation is logged in the record, not fatal). Throws on
// inner-solver non-convergence, with the step index in the message.
PiaResult run_pia(const ControlProblem& problem, const Grid2D& grid, const PiaConfig& config);

// The step-0 solve on its own: policy frozen at zero, started from V0 = 0.
// Shares the code path with the first inner solve of run_pia.
std::pair<ScalarField, SolveStats> solve_linear_baseline(
    const ControlProblem& problem, const Grid2D& grid, double tol1,
    Scheme scheme = Scheme::gauss_seidel, std::int64_t max_sweeps = 1'000'000,
    const std::function<void(std::int64_t sweep, double max_diff)>& on_sweep = {});

}  // namespace pia
