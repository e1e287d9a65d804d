#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerical kernels.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cvdag/model.hpp"

namespace oracle {

using cvdag::Matrix;
using cvdag::Vector;

// Directed cycle among edges with weight > eps, by colored DFS.
inline bool has_cycle(const Matrix& a, double eps) {
    const auto n = a.rows();
    std::vector<int> color(static_cast<std::size_t>(n), 0);
    std::function<bool(Eigen::Index)> visit = [&](Eigen::Index u) {
        color[static_cast<std::size_t>(u)] = 1;
        for (Eigen::Index v = 0; v < n; ++v) {
            if (a(u, v) <= eps) continue;
            const int c = color[static_cast<std::size_t>(v)];
            if (c == 1) return true;
            if (c == 0 && visit(v)) return true;
        }
        color[static_cast<std::size_t>(u)] = 2;
        return false;
    };
    for (Eigen::Index u = 0; u < n; ++u)
        if (color[static_cast<std::size_t>(u)] == 0 && visit(u)) return true;
    return false;
}

// Plain Taylor series of e^A, no scaling. Only for small ||A||.
inline Matrix series_expm(const Matrix& a, int terms = 60) {
    Matrix sum = Matrix::Identity(a.rows(), a.cols());
    Matrix term = sum;
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

// Central differences of a scalar function of a matrix.
inline Matrix central_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x,
                               double h = 1e-6) {
    Matrix g(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            Matrix up = x, dn = x;
            up(r, c) += h;
            dn(r, c) -= h;
            g(r, c) = (f(up) - f(dn)) / (2.0 * h);
        }
    return g;
}

// Covariate vector built straight from the index map f(j, l) = 1 + (j-1)tau + l.
inline Vector window(const cvdag::TimeSeriesPanel& p, long t) {
    const std::size_t tau = p.memory();
    Vector w = Vector::Zero(static_cast<Eigen::Index>(1 + tau * p.n_nodes()));
    w(0) = 1.0;
    for (std::size_t j = 1; j <= p.n_nodes(); ++j)
        for (std::size_t l = 1; l <= tau; ++l)
            w(static_cast<Eigen::Index>((j - 1) * tau + l)) = p.at(j - 1, t - static_cast<long>(l));
    return w;
}

// W = (1/T) sum w w', b = (1/T) sum w y'.
struct Moments {
    Matrix w;
    Matrix b;
};

inline Moments moments(const cvdag::TimeSeriesPanel& p) {
    const auto d = static_cast<Eigen::Index>(1 + p.memory() * p.n_nodes());
    const auto d1 = static_cast<Eigen::Index>(p.n_nodes());
    Moments m{Matrix::Zero(d, d), Matrix::Zero(d, d1)};
    for (long t = 1; t <= static_cast<long>(p.horizon()); ++t) {
        const Vector w = window(p, t);
        m.w += w * w.transpose();
        for (Eigen::Index i = 0; i < d1; ++i) m.b.col(i) += w * p.at(static_cast<std::size_t>(i), t);
    }
    m.w /= static_cast<double>(p.horizon());
    m.b /= static_cast<double>(p.horizon());
    return m;
}

// Unconstrained least-squares solution W^{-1} b of the linear-link model.
inline Matrix closed_form_linear(const cvdag::TimeSeriesPanel& p) {
    const Moments m = moments(p);
    return m.w.fullPivLu().solve(m.b);
}

} // namespace oracle
