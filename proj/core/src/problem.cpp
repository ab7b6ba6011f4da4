#include "pia/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pia {

ControlProblem make_example_problem(double sigma, double eta, double alpha,
                                    double x_min, double x_max, double y_min, double y_max) {
    if (!(sigma > 0.0) || !(eta > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("nonpositive-parameter: sigma, eta and alpha must be positive");
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("invalid-bounds: require x_min < x_max and y_min < y_max");
    if (x_min <= 0.0 || y_min <= 0.0)
        throw std::invalid_argument("invalid-bounds: domain must exclude the coordinate axes");

    ControlProblem p;
    p.drift_matrix = [](Vec2 z) { return DriftMatrix::column(z); };
    p.drift_offset = [](Vec2) { return Vec2{0.0, 0.0}; };
    p.diffusion = [sigma, eta](Vec2 z) { return std::array<double, 2>{sigma * z.x, eta * z.y}; };
    p.reward.c = [](Vec2) { return 1.0; };
    p.reward.r = [](Vec2) { return Action{0.0}; };
    p.reward.q = [](Vec2) { return SymMatrix::identity(1); };
    p.discount = alpha;
    p.boundary_payoff = [](Vec2) { return 0.0; };
    p.x_min = x_min;
    p.x_max = x_max;
    p.y_min = y_min;
    p.y_max = y_max;
    p.action_dim = 1;
    return p;
}

Action greedy_policy(const ControlProblem& problem, Vec2 grad_v, Vec2 state) {
    const DriftMatrix m = problem.drift_matrix(state);
    Action u = m.apply_transpose(grad_v);
    const Action r = problem.reward.r(state);
    for (int i = 0; i < u.size(); ++i) u[i] += r[i];
    return problem.reward.q(state).solve(u);
}

double hamiltonian_max(const ControlProblem& problem, Vec2 grad_v, Vec2 state) {
    const DriftMatrix m = problem.drift_matrix(state);
    Action u = m.apply_transpose(grad_v);
    const Action r = problem.reward.r(state);
    for (int i = 0; i < u.size(); ++i) u[i] += r[i];
    const Action qinv_u = problem.reward.q(state).solve(u);
    return problem.reward.c(state) + dot(problem.drift_offset(state), grad_v) + 0.5 * dot(u, qinv_u);
}

EllipticityBounds ellipticity_bounds(const ControlProblem& problem, int samples_per_axis) {
    if (samples_per_axis < 2) throw std::invalid_argument("samples_per_axis must be >= 2");
    const double hx = (problem.x_max - problem.x_min) / (samples_per_axis - 1);
    const double hy = (problem.y_max - problem.y_min) / (samples_per_axis - 1);
    EllipticityBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (int k = 0; k < samples_per_axis; ++k) {
        for (int j = 0; j < samples_per_axis; ++j) {
            const Vec2 z{problem.x_min + j * hx, problem.y_min + k * hy};
            const auto a = problem.diffusion_quadratic(z);
            b.a_min = std::min({b.a_min, a[0], a[1]});
            b.a_max = std::max({b.a_max, a[0], a[1]});
        }
    }
    if (!(b.a_min > 0.0))
        throw std::domain_error("degenerate-diffusion: a(x) has a nonpositive eigenvalue on the closed domain");
    return b;
}

double min_reward_curvature(const ControlProblem& problem, const Grid2D& grid) {
    double lambda = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.n; ++k)
        for (int j = 0; j < grid.n; ++j)
            lambda = std::min(lambda, problem.reward.q(grid.node(j, k)).min_eigenvalue());
    return lambda;
}

}  // namespace pia
