#include "pia/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pia {

Grid2D build_grid(double x_min, double x_max, double y_min, double y_max, int n) {
    if (!(x_min < x_max) || !(y_min < y_max))
        throw std::invalid_argument("invalid-bounds: require x_min < x_max and y_min < y_max");
    if (n < 3)
        throw std::invalid_argument("n-too-small: need n >= 3 for at least one interior node per axis");
    Grid2D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.y_min = y_min;
    g.y_max = y_max;
    g.n = n;
    g.dx = (x_max - x_min) / (n - 1);
    g.dy = (y_max - y_min) / (n - 1);
    return g;
}

void ScalarField::check_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) throw std::domain_error("non-finite field value");
}

namespace {

// Cell index and barycentric weight along one axis, clamped to the grid.
void locate(double t, double t0, double h, int n, int& i, double& w) {
    double s = (t - t0) / h;
    i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, n - 2);
    w = std::clamp(s - i, 0.0, 1.0);
}

}  // namespace

double ScalarField::interpolate(Vec2 p) const {
    int j, k;
    double wx, wy;
    locate(p.x, grid_.x_min, grid_.dx, grid_.n, j, wx);
    locate(p.y, grid_.y_min, grid_.dy, grid_.n, k, wy);
    const double v00 = (*this)(j, k), v10 = (*this)(j + 1, k);
    const double v01 = (*this)(j, k + 1), v11 = (*this)(j + 1, k + 1);
    return (1 - wy) * ((1 - wx) * v00 + wx * v10) + wy * ((1 - wx) * v01 + wx * v11);
}

Action PolicyField::interpolate(Vec2 p) const {
    // Clamp to the hull of interior nodes, then bilinear between them.
    const int m = grid_.n - 2;  // interior nodes per axis
    auto locate_interior = [m](double t, double t0, double h, int& i, double& w) {
        double s = (t - t0) / h - 1.0;  // 0 at the first interior node
        if (m == 1) { i = 0; w = 0.0; return; }
        i = static_cast<int>(std::floor(s));
        i = std::clamp(i, 0, m - 2);
        w = std::clamp(s - i, 0.0, 1.0);
    };
    int j, k;
    double wx, wy;
    locate_interior(p.x, grid_.x_min, grid_.dx, j, wx);
    locate_interior(p.y, grid_.y_min, grid_.dy, k, wy);
    const int j0 = j + 1, k0 = k + 1;
    const int j1 = std::min(j0 + 1, m), k1 = std::min(k0 + 1, m);
    Action a(dim_);
    for (int c = 0; c < dim_; ++c) {
        const double v00 = component(j0, k0, c), v10 = component(j1, k0, c);
        const double v01 = component(j0, k1, c), v11 = component(j1, k1, c);
        a[c] = (1 - wy) * ((1 - wx) * v00 + wx * v10) + wy * ((1 - wx) * v01 + wx * v11);
    }
    return a;
}

std::pair<ScalarField, ScalarField> central_gradient(const ScalarField& f) {
    const Grid2D& g = f.grid();
    ScalarField fx(g), fy(g);
    const double inv2dx = 1.0 / (2.0 * g.dx);
    const double inv2dy = 1.0 / (2.0 * g.dy);
    for (int k = 1; k < g.n - 1; ++k) {
        for (int j = 1; j < g.n - 1; ++j) {
            fx(j, k) = (f(j + 1, k) - f(j - 1, k)) * inv2dx;
            fy(j, k) = (f(j, k + 1) - f(j, k - 1)) * inv2dy;
        }
    }
    return {std::move(fx), std::move(fy)};
}

double sup_norm_diff(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("grid-mismatch: fields live on different grids");
    double m = 0.0;
    const auto& av = a.values();
    const auto& bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
    return m;
}

double max_policy_diff(const PolicyField& a, const PolicyField& b) {
    if (a.grid() != b.grid() || a.action_dim() != b.action_dim())
        throw std::invalid_argument("grid-mismatch: policy fields live on different grids");
    const Grid2D& g = a.grid();
    double m = 0.0;
    for (int k = 1; k < g.n - 1; ++k)
        for (int j = 1; j < g.n - 1; ++j)
            for (int c = 0; c < a.action_dim(); ++c)
                m = std::max(m, std::abs(a.component(j, k, c) - b.component(j, k, c)));
    return m;
}

void write_csv(const ScalarField& f, std::ostream& os) {
    const Grid2D& g = f.grid();
    os << "x,y,value\n";
    char buf[128];
    for (int k = 0; k < g.n; ++k) {
        for (int j = 0; j < g.n; ++j) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", g.x(j), g.y(k), f(j, k));
            os << buf;
        }
    }
}

void write_csv(const PolicyField& p, std::ostream& os) {
    const Grid2D& g = p.grid();
    char buf[160];
    if (p.action_dim() == 1) {
        os << "x,y,value\n";
    } else {
        os << "x,y";
        for (int c = 0; c < p.action_dim(); ++c) os << ",value" << c;
        os << "\n";
    }
    for (int k = 1; k < g.n - 1; ++k) {
        for (int j = 1; j < g.n - 1; ++j) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g", g.x(j), g.y(k));
            os << buf;
            for (int c = 0; c < p.action_dim(); ++c) {
                std::snprintf(buf, sizeof buf, ",%.9g", p.component(j, k, c));
                os << buf;
            }
            os << "\n";
        }
    }
}

}  // namespace pia
