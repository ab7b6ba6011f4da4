// Controlled-diffusion problem data and the closed-form greedy policy.
//
// The drift is affine in the action, mu_pi(x) = M(x) pi + b(x); the diffusion
// matrix is diagonal and action-independent; the running reward is quadratic
// and strictly concave in the action,
//   f_pi(x) = c(x) + r(x)' pi - (1/2) pi' Q(x) pi,  Q(x) SPD.
// Under these shapes the Hamiltonian argmax has the closed form
//   pi*(x) = Q(x)^{-1} (M(x)' grad_V + r(x)).
#pragma once

#include <functional>

#include "pia/grid.hpp"
#include "pia/linalg.hpp"

namespace pia {

struct QuadraticReward {
    std::function<double(Vec2)> c;
    std::function<Action(Vec2)> r;
    std::function<SymMatrix(Vec2)> q;

    double value(Vec2 state, const Action& pi) const {
        return c(state) + dot(r(state), pi) - 0.5 * dot(pi, q(state).apply(pi));
    }
};

struct ControlProblem {
    std::function<DriftMatrix(Vec2)> drift_matrix;        // M(x), 2 x d
    std::function<Vec2(Vec2)> drift_offset;               // b(x)
    std::function<std::array<double, 2>(Vec2)> diffusion; // diagonal of sigma(x)
    QuadraticReward reward;
    double discount = 0.0;                                // alpha > 0
    std::function<double(Vec2)> boundary_payoff;          // g on the boundary
    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    int action_dim = 0;

    Vec2 drift(Vec2 state, const Action& pi) const {
        return drift_matrix(state).apply(pi) + drift_offset(state);
    }
    // Diagonal of a(x) = (1/2) sigma sigma'.
    std::array<double, 2> diffusion_quadratic(Vec2 state) const {
        auto s = diffusion(state);
        return {0.5 * s[0] * s[0], 0.5 * s[1] * s[1]};
    }
};

// The worked two-dimensional instance: drift (pi x, pi y), diffusion
// diag(sigma x, eta y), reward 1 - pi^2/2, zero boundary payoff.
ControlProblem make_example_problem(double sigma, double eta, double alpha,
                                    double x_min, double x_max, double y_min, double y_max);

// Unique maximizer of pi -> mu_pi' grad_v + f_pi(state).
Action greedy_policy(const ControlProblem& problem, Vec2 grad_v, Vec2 state);

// The maximized Hamiltonian sup_pi { mu_pi' grad_v + f_pi }, evaluated in
// closed form: c + b' grad_v + (1/2) u' Q^{-1} u with u = M' grad_v + r.
double hamiltonian_max(const ControlProblem& problem, Vec2 grad_v, Vec2 state);

struct EllipticityBounds {
    double a_min = 0.0;
    double a_max = 0.0;
    // nu with 1/nu <= a_min <= a_max <= nu.
    double nu() const { return std::max(a_max, 1.0 / a_min); }
};

// Extremes over the closed domain of the eigenvalues of a(x) = (1/2) sigma sigma',
// located by dense sampling (boundary included). Throws if the diffusion
// degenerates anywhere sampled.
EllipticityBounds ellipticity_bounds(const ControlProblem& problem, int samples_per_axis = 201);

// min over grid nodes of the smallest eigenvalue of Q(x); the uniform
// concavity diagnostic reported alongside the ellipticity constant.
double min_reward_curvature(const ControlProblem& problem, const Grid2D& grid);

}  // namespace pia
