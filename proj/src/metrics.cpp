#include "cvdag/metrics.hpp"

#include <cmath>

#include "cvdag/error.hpp"
#include "cvdag/graphgen.hpp"

namespace cvdag {

Eigen::MatrixXi binarize(const Matrix& a, double edge_eps) {
    return (a.array() > edge_eps).cast<int>();
}

std::size_t shd(const Matrix& a_hat, const Matrix& a_true, double edge_eps, ShdConvention convention) {
    if (a_hat.rows() != a_true.rows() || a_hat.cols() != a_true.cols()) {
        throw ShapeError("shd: matrices differ in shape");
    }
    const Eigen::MatrixXi mismatch = (binarize(a_hat, edge_eps).array() != binarize(a_true, edge_eps).array()).cast<int>();
    if (convention == ShdConvention::Entrywise || a_hat.rows() != a_hat.cols()) {
        return static_cast<std::size_t>(mismatch.sum());
    }
    std::size_t distance = static_cast<std::size_t>(mismatch.diagonal().sum());
    for (Eigen::Index i = 0; i < mismatch.rows(); ++i)
        for (Eigen::Index j = i + 1; j < mismatch.cols(); ++j)
            if (mismatch(i, j) || mismatch(j, i)) ++distance;
    return distance;
}

double a_err(const Matrix& a_hat, const Matrix& a_true) {
    if (a_hat.rows() != a_true.rows() || a_hat.cols() != a_true.cols()) {
        throw ShapeError("a_err: matrices differ in shape");
    }
    return (a_hat - a_true).norm();
}

double nu_err(const Vector& nu_hat, const Vector& nu_true) {
    if (nu_hat.size() != nu_true.size()) throw ShapeError("nu_err: vectors differ in size");
    return (nu_hat - nu_true).norm();
}

RecoveryMetrics evaluate(const ParamMatrix& estimate, const ParamMatrix& truth, double edge_eps,
                         ShdConvention convention) {
    if (estimate.n_nodes() != truth.n_nodes() || estimate.memory() != truth.memory()) {
        throw ShapeError("evaluate: estimate and truth differ in shape");
    }
    RecoveryMetrics m;
    double squared = 0.0;
    for (std::size_t lag = 1; lag <= truth.memory(); ++lag) {
        const Matrix a_hat = extract_lag_matrix(estimate, lag);
        const Matrix a_true = extract_lag_matrix(truth, lag);
        squared += (a_hat - a_true).squaredNorm();
        m.shd += shd(a_hat, a_true, edge_eps, convention);
        m.dagness += dagness(a_hat);
    }
    m.a_err = std::sqrt(squared);
    m.nu_err = nu_err(estimate.backgrounds(), truth.backgrounds());
    return m;
}

} // namespace cvdag
