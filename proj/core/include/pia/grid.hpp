// Uniform 2-D rectangular grid, node-indexed fields and discrete calculus.
//
// Node (j,k) sits at (x_min + j*dx, y_min + k*dy), 0 <= j,k <= n-1.
// Fields store one value per node in row-major order with x varying fastest:
// index(j,k) = k*n + j. Sweeps and CSV output follow that same order, so
// Gauss-Seidel results are reproducible bit-for-bit for a given configuration.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "pia/linalg.hpp"

namespace pia {

struct Grid2D {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    int n = 0;       // nodes per axis, boundary included
    double dx = 0.0; // (x_max - x_min) / (n - 1)
    double dy = 0.0;

    double x(int j) const { return x_min + j * dx; }
    double y(int k) const { return y_min + k * dy; }
    Vec2 node(int j, int k) const { return {x(j), y(k)}; }
    std::size_t index(int j, int k) const { return static_cast<std::size_t>(k) * n + j; }
    std::size_t node_count() const { return static_cast<std::size_t>(n) * n; }
    std::size_t interior_count() const { return static_cast<std::size_t>(n - 2) * (n - 2); }
    bool is_boundary(int j, int k) const { return j == 0 || k == 0 || j == n - 1 || k == n - 1; }
    bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }

    friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

Grid2D build_grid(double x_min, double x_max, double y_min, double y_max, int n);

// Scalar values over the full grid.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double fill = 0.0)
        : grid_(g), values_(g.node_count(), fill) {}

    const Grid2D& grid() const { return grid_; }
    double operator()(int j, int k) const { return values_[grid_.index(j, k)]; }
    double& operator()(int j, int k) { return values_[grid_.index(j, k)]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Throws if any value is non-finite.
    void check_finite() const;

    // Value at an arbitrary in-domain point by bilinear interpolation.
    double interpolate(Vec2 p) const;

  private:
    Grid2D grid_;
    std::vector<double> values_;
};

// d-dimensional actions at interior nodes only; boundary actions are
// irrelevant under Dirichlet data and are not stored.
class PolicyField {
  public:
    PolicyField() = default;
    PolicyField(const Grid2D& g, int action_dim)
        : grid_(g), dim_(action_dim),
          values_(g.interior_count() * static_cast<std::size_t>(action_dim), 0.0) {}

    const Grid2D& grid() const { return grid_; }
    int action_dim() const { return dim_; }

    Action at(int j, int k) const {
        Action a(dim_);
        const double* p = &values_[offset(j, k)];
        for (int c = 0; c < dim_; ++c) a[c] = p[c];
        return a;
    }
    void set(int j, int k, const Action& a) {
        double* p = &values_[offset(j, k)];
        for (int c = 0; c < dim_; ++c) p[c] = a[c];
    }
    double component(int j, int k, int c) const { return values_[offset(j, k) + c]; }

    // Action at an arbitrary point, clamped to the interior-node hull and
    // bilinearly interpolated per component.
    Action interpolate(Vec2 p) const;

  private:
    std::size_t offset(int j, int k) const {
        return (static_cast<std::size_t>(k - 1) * (grid_.n - 2) + (j - 1)) * dim_;
    }
    Grid2D grid_;
    int dim_ = 0;
    std::vector<double> values_;
};

// Central differences on interior nodes; boundary entries of the results are zero.
std::pair<ScalarField, ScalarField> central_gradient(const ScalarField& f);

// max over all nodes of |a - b|; throws on grid mismatch.
double sup_norm_diff(const ScalarField& a, const ScalarField& b);

// max over interior nodes and components of |a - b|; throws on grid mismatch.
double max_policy_diff(const PolicyField& a, const PolicyField& b);

// CSV with header x,y,value, one row per node in storage order, 9 significant digits.
void write_csv(const ScalarField& f, std::ostream& os);
void write_csv(const PolicyField& p, std::ostream& os);

}  // namespace pia
