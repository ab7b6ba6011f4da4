// Numerical verification of the quadratic local convergence of the policy
// improvement iterates, the Taylor residual identity behind it, and the
// linear PDE satisfied by successive value differences W_i.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pia/fdm_solver.hpp"
#include "pia/grid.hpp"
#include "pia/policy_iteration.hpp"
#include "pia/problem.hpp"

namespace pia {

// Discrete norm proxies reported per W_i. Quadratic local convergence is
// naturally stated in Hoelder norms, which have no stable discrete analogue
// at this resolution; these three stand in side by side.
enum class NormKind { sup_value, sup_gradient, sup_second_diff };
const char* norm_kind_name(NormKind kind);

struct QlcEntry {
    int step = 0;            // index i of w_norms[i], i >= 1
    double w_norm = 0.0;     // ||W_i||
    double ratio = 0.0;      // C_i = ||W_i|| / ||W_{i-1}||^2
    // Set when ||W_{i-1}|| is below the noise floor: the squared denominator
    // is then solver noise and the ratio is excluded from the empirical C.
    bool floor_flagged = false;
};

struct QlcReport {
    std::vector<double> w_norms;
    double noise_floor = 0.0;
    std::vector<QlcEntry> entries;          // one per defined ratio
    std::optional<double> empirical_c;      // max unflagged ratio
};

// Ratios C_i = w_i / w_{i-1}^2 for each consecutive pair with w_{i-1} > 0.
// Throws sequence-too-short if fewer than two norms are given.
QlcReport qlc_ratios(const std::vector<double>& w_norms, double noise_floor);

struct DoublingCheck {
    double c = 0.0;
    bool in_contraction_region = false;     // C * w_0 < 1
    std::vector<double> bounds;             // bounds[i-1] = (C w_0)^(2^i) / C
    std::vector<bool> holds;                // holds[i-1] = (w_i <= bound)
};

// Checks the iterated bound w_i <= (C w_0)^(2^i) / C per step. C must be positive.
DoublingCheck doubling_check(const std::vector<double>& w_norms, double c);

struct ResidualReport {
    double max_abs_r = 0.0;
    double max_w_pde_residual = 0.0;
};

// Taylor remainder source R = (1/2) (M' grad_W)' Q^{-1} (M' grad_W) at interior
// nodes (zero on the boundary). Nonnegative everywhere by positive-definiteness.
ScalarField residual_field(const ControlProblem& problem, const ScalarField& w_prev,
                           const Grid2D& grid);

// Bundles one step of the W-equation check: builds R from w_prev and reports
// its peak together with the discrete residual of w under policy_next.
ResidualReport residual_report(const ControlProblem& problem, const ScalarField& w_prev,
                               const ScalarField& w, const PolicyField& policy_next,
                               const Grid2D& grid);

// Discrete check of the W-equation: the stencil of `policy_next` applied to
// w_i with source r_i should vanish. Returns the max interior residual.
double verify_w_pde(const ControlProblem& problem, const ScalarField& w_i,
                    const PolicyField& policy_next, const ScalarField& r_i, const Grid2D& grid);

// Residual of the discretized semilinear limit equation at v: the frozen-policy
// operator with the greedy policy substituted, i.e. for the worked example
//   a_x Vxx + a_y Vyy - alpha V + 1 + (1/2)(x Vx + y Vy)^2
// with centered differences. Returns the max interior absolute value.
double semilinear_residual(const ControlProblem& problem, const ScalarField& v, const Grid2D& grid);

// Norm sequence over a W-field history for one proxy kind.
std::vector<double> w_norm_sequence(const std::vector<ScalarField>& w_fields, NormKind kind);

// Per-norm-kind QLC reports for a finished run.
struct RunQlc {
    NormKind kind;
    QlcReport report;
};
std::vector<RunQlc> qlc_from_run(const std::vector<ScalarField>& w_fields, double noise_floor);

// CSV rows `step,norm_kind,w_norm,ratio,flagged`; ratio and flag blank on step 0.
void write_qlc_csv(const std::vector<RunQlc>& reports, std::ostream& os);

}  // namespace pia
