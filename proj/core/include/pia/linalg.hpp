// Small fixed-capacity dense linear algebra for low-dimensional actions.
//
// State space is 2-D throughout; actions live in R^d with d <= kMaxActionDim.
// Everything here is inline storage, so the Monte Carlo and sweep hot loops
// stay allocation-free.
#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace pia {

inline constexpr int kMaxActionDim = 8;

// Point or vector in the 2-D state space.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// d-dimensional action vector, inline storage.
class Action {
  public:
    Action() = default;
    explicit Action(int dim, double fill = 0.0) : n_(check_dim(dim)) {
        v_.fill(0.0);
        for (int i = 0; i < n_; ++i) v_[i] = fill;
    }
    Action(std::initializer_list<double> xs) : n_(check_dim(static_cast<int>(xs.size()))) {
        v_.fill(0.0);
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }

    int size() const { return n_; }
    double operator[](int i) const { assert(i >= 0 && i < n_); return v_[i]; }
    double& operator[](int i) { assert(i >= 0 && i < n_); return v_[i]; }

    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(v_[i]));
        return m;
    }
    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += v_[i] * v_[i];
        return std::sqrt(s);
    }

  private:
    static int check_dim(int d) {
        if (d < 0 || d > kMaxActionDim) throw std::invalid_argument("Action: dimension out of range");
        return d;
    }
    std::array<double, kMaxActionDim> v_{};
    int n_ = 0;
};

inline Action operator-(const Action& a, const Action& b) {
    assert(a.size() == b.size());
    Action r(a.size());
    for (int i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Action operator+(const Action& a, const Action& b) {
    assert(a.size() == b.size());
    Action r(a.size());
    for (int i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// 2 x d matrix mapping actions to state-space drift (the M(x) of the drift Mπ + b).
class DriftMatrix {
  public:
    DriftMatrix() = default;
    explicit DriftMatrix(int cols) : d_(Action(cols).size()) { m_.fill(0.0); }
    // Column-constructor for the common d = 1 case.
    static DriftMatrix column(Vec2 c) {
        DriftMatrix m(1);
        m(0, 0) = c.x;
        m(1, 0) = c.y;
        return m;
    }

    int cols() const { return d_; }
    double operator()(int row, int col) const { assert(row >= 0 && row < 2); return m_[static_cast<std::size_t>(col) * 2 + row]; }
    double& operator()(int row, int col) { assert(row >= 0 && row < 2); return m_[static_cast<std::size_t>(col) * 2 + row]; }

    // M π
    Vec2 apply(const Action& p) const {
        assert(p.size() == d_);
        Vec2 r;
        for (int c = 0; c < d_; ++c) {
            r.x += (*this)(0, c) * p[c];
            r.y += (*this)(1, c) * p[c];
        }
        return r;
    }
    // Mᵀ v
    Action apply_transpose(Vec2 v) const {
        Action r(d_);
        for (int c = 0; c < d_; ++c) r[c] = (*this)(0, c) * v.x + (*this)(1, c) * v.y;
        return r;
    }

  private:
    std::array<double, 2 * kMaxActionDim> m_{};
    int d_ = 0;
};

// Symmetric d x d matrix (the reward curvature Q(x)).
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(int dim) : d_(Action(dim).size()) { m_.fill(0.0); }
    static SymMatrix identity(int dim, double scale = 1.0) {
        SymMatrix q(dim);
        for (int i = 0; i < dim; ++i) q(i, i) = scale;
        return q;
    }

    int size() const { return d_; }
    double operator()(int i, int j) const { return m_[static_cast<std::size_t>(i) * kMaxActionDim + j]; }
    double& operator()(int i, int j) { return m_[static_cast<std::size_t>(i) * kMaxActionDim + j]; }

    Action apply(const Action& p) const {
        assert(p.size() == d_);
        Action r(d_);
        for (int i = 0; i < d_; ++i) {
            double s = 0.0;
            for (int j = 0; j < d_; ++j) s += (*this)(i, j) * p[j];
            r[i] = s;
        }
        return r;
    }

    // Solves (this) x = rhs by Cholesky; requires symmetric positive definite.
    Action solve(const Action& rhs) const;

    // Eigenvalues by cyclic Jacobi rotations, ascending order.
    std::array<double, kMaxActionDim> eigenvalues() const;
    double min_eigenvalue() const { return eigenvalues()[0]; }

  private:
    std::array<double, kMaxActionDim * kMaxActionDim> m_{};
    int d_ = 0;
};

inline double dot(const Action& a, const Action& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Action SymMatrix::solve(const Action& rhs) const {
    assert(rhs.size() == d_);
    // Cholesky factor L with this = L Lᵀ.
    std::array<double, kMaxActionDim * kMaxActionDim> l{};
    auto L = [&l](int i, int j) -> double& { return l[static_cast<std::size_t>(i) * kMaxActionDim + j]; };
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = (*this)(i, j);
            for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0) throw std::domain_error("singular-Q: reward curvature matrix is not positive definite");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    // Forward then backward substitution.
    Action y(d_);
    for (int i = 0; i < d_; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    Action x(d_);
    for (int i = d_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < d_; ++k) s -= L(k, i) * x[k];
        x[i] = s / L(i, i);
    }
    return x;
}

inline std::array<double, kMaxActionDim> SymMatrix::eigenvalues() const {
    std::array<double, kMaxActionDim * kMaxActionDim> a = m_;
    auto A = [&a](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * kMaxActionDim + j]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < d_; ++i)
            for (int j = i + 1; j < d_; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < d_; ++p) {
            for (int q = p + 1; q < d_; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d_; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d_; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::array<double, kMaxActionDim> ev{};
    for (int i = 0; i < d_; ++i) ev[i] = A(i, i);
    std::sort(ev.begin(), ev.begin() + d_);
    return ev;
}

}  // namespace pia
