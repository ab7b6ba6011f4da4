#include "pia/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pia {

const char* norm_kind_name(NormKind kind) {
    switch (kind) {
        case NormKind::sup_value: return "sup";
        case NormKind::sup_gradient: return "grad_sup";
        case NormKind::sup_second_diff: return "second_diff_sup";
    }
    return "?";
}

QlcReport qlc_ratios(const std::vector<double>& w_norms, double noise_floor) {
    if (w_norms.size() < 2)
        throw std::invalid_argument("sequence-too-short: need at least two norms for a ratio");
    for (double w : w_norms)
        if (w < 0.0) throw std::invalid_argument("norms must be nonnegative");

    QlcReport rep;
    rep.w_norms = w_norms;
    rep.noise_floor = noise_floor;
    for (std::size_t i = 1; i < w_norms.size(); ++i) {
        const double prev = w_norms[i - 1];
        if (prev <= 0.0) continue;
        QlcEntry e;
        e.step = static_cast<int>(i);
        e.w_norm = w_norms[i];
        e.ratio = w_norms[i] / (prev * prev);
        e.floor_flagged = prev < noise_floor;
        if (!e.floor_flagged) {
            if (!rep.empirical_c || e.ratio > *rep.empirical_c) rep.empirical_c = e.ratio;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

DoublingCheck doubling_check(const std::vector<double>& w_norms, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("doubling_check: C must be positive");
    DoublingCheck chk;
    chk.c = c;
    if (w_norms.empty()) return chk;
    const double base = c * w_norms[0];
    chk.in_contraction_region = base < 1.0;
    double pow_term = base;  // (C w_0)^(2^i), starting at i = 0
    for (std::size_t i = 1; i < w_norms.size(); ++i) {
        pow_term *= pow_term;
        const double bound = pow_term / c;
        chk.bounds.push_back(bound);
        chk.holds.push_back(w_norms[i] <= bound);
    }
    return chk;
}

ScalarField residual_field(const ControlProblem& problem, const ScalarField& w_prev,
                           const Grid2D& grid) {
    if (w_prev.grid() != grid) throw std::invalid_argument("grid-mismatch: W field does not match grid");
    const auto [wx, wy] = central_gradient(w_prev);
    ScalarField r(grid);
    for (int k = 1; k < grid.n - 1; ++k) {
        for (int j = 1; j < grid.n - 1; ++j) {
            const Vec2 z = grid.node(j, k);
            const Action u = problem.drift_matrix(z).apply_transpose({wx(j, k), wy(j, k)});
            r(j, k) = 0.5 * dot(u, problem.reward.q(z).solve(u));
        }
    }
    return r;
}

double verify_w_pde(const ControlProblem& problem, const ScalarField& w_i,
                    const PolicyField& policy_next, const ScalarField& r_i, const Grid2D& grid) {
    if (w_i.grid() != grid || r_i.grid() != grid || policy_next.grid() != grid)
        throw std::invalid_argument("grid-mismatch: W/R/policy fields must share the grid");
    const StencilSystem s = assemble_stencil(problem, grid, policy_next);
    return equation_residual(s, w_i, &r_i);
}

ResidualReport residual_report(const ControlProblem& problem, const ScalarField& w_prev,
                               const ScalarField& w, const PolicyField& policy_next,
                               const Grid2D& grid) {
    const ScalarField r = residual_field(problem, w_prev, grid);
    ResidualReport rep;
    for (double v : r.values()) rep.max_abs_r = std::max(rep.max_abs_r, std::abs(v));
    rep.max_w_pde_residual = verify_w_pde(problem, w, policy_next, r, grid);
    return rep;
}

double semilinear_residual(const ControlProblem& problem, const ScalarField& v, const Grid2D& grid) {
    if (v.grid() != grid) throw std::invalid_argument("grid-mismatch: value field does not match grid");
    const double inv_dx2 = 1.0 / (grid.dx * grid.dx);
    const double inv_dy2 = 1.0 / (grid.dy * grid.dy);
    const double inv_2dx = 1.0 / (2.0 * grid.dx);
    const double inv_2dy = 1.0 / (2.0 * grid.dy);
    double worst = 0.0;
    for (int k = 1; k < grid.n - 1; ++k) {
        for (int j = 1; j < grid.n - 1; ++j) {
            const Vec2 z = grid.node(j, k);
            const auto a = problem.diffusion_quadratic(z);
            const double vxx = (v(j + 1, k) - 2.0 * v(j, k) + v(j - 1, k)) * inv_dx2;
            const double vyy = (v(j, k + 1) - 2.0 * v(j, k) + v(j, k - 1)) * inv_dy2;
            const Vec2 grad{(v(j + 1, k) - v(j - 1, k)) * inv_2dx,
                            (v(j, k + 1) - v(j, k - 1)) * inv_2dy};
            const double res = a[0] * vxx + a[1] * vyy - problem.discount * v(j, k) +
                               hamiltonian_max(problem, grad, z);
            worst = std::max(worst, std::abs(res));
        }
    }
    return worst;
}

std::vector<double> w_norm_sequence(const std::vector<ScalarField>& w_fields, NormKind kind) {
    std::vector<double> norms;
    norms.reserve(w_fields.size());
    for (const ScalarField& w : w_fields) {
        const Grid2D& g = w.grid();
        double m = 0.0;
        switch (kind) {
            case NormKind::sup_value:
                for (double v : w.values()) m = std::max(m, std::abs(v));
                break;
            case NormKind::sup_gradient: {
                const auto [wx, wy] = central_gradient(w);
                for (int k = 1; k < g.n - 1; ++k)
                    for (int j = 1; j < g.n - 1; ++j)
                        m = std::max(m, std::hypot(wx(j, k), wy(j, k)));
                break;
            }
            case NormKind::sup_second_diff: {
                const double inv_dx2 = 1.0 / (g.dx * g.dx);
                const double inv_dy2 = 1.0 / (g.dy * g.dy);
                for (int k = 1; k < g.n - 1; ++k) {
                    for (int j = 1; j < g.n - 1; ++j) {
                        const double wxx = (w(j + 1, k) - 2.0 * w(j, k) + w(j - 1, k)) * inv_dx2;
                        const double wyy = (w(j, k + 1) - 2.0 * w(j, k) + w(j, k - 1)) * inv_dy2;
                        m = std::max({m, std::abs(wxx), std::abs(wyy)});
                    }
                }
                break;
            }
        }
        norms.push_back(m);
    }
    return norms;
}

std::vector<RunQlc> qlc_from_run(const std::vector<ScalarField>& w_fields, double noise_floor) {
    std::vector<RunQlc> out;
    for (NormKind kind : {NormKind::sup_value, NormKind::sup_gradient, NormKind::sup_second_diff}) {
        const auto norms = w_norm_sequence(w_fields, kind);
        if (norms.size() < 2) continue;
        out.push_back({kind, qlc_ratios(norms, noise_floor)});
    }
    return out;
}

void write_qlc_csv(const std::vector<RunQlc>& reports, std::ostream& os) {
    os << "step,norm_kind,w_norm,ratio,flagged\n";
    char buf[160];
    for (const RunQlc& rq : reports) {
        const auto& rep = rq.report;
        for (std::size_t i = 0; i < rep.w_norms.size(); ++i) {
            const QlcEntry* e = nullptr;
            for (const QlcEntry& cand : rep.entries)
                if (cand.step == static_cast<int>(i)) { e = &cand; break; }
            if (e) {
                std::snprintf(buf, sizeof buf, "%zu,%s,%.8f,%.8f,%d\n", i, norm_kind_name(rq.kind),
                              rep.w_norms[i], e->ratio, e->floor_flagged ? 1 : 0);
            } else {
                std::snprintf(buf, sizeof buf, "%zu,%s,%.8f,,\n", i, norm_kind_name(rq.kind),
                              rep.w_norms[i]);
            }
            os << buf;
        }
    }
}

}  // namespace pia
