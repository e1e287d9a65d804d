#pragma once

#include <cstddef>

#include "cvdag/model.hpp"

namespace cvdag {

enum class ShdConvention {
    Entrywise,     // Hamming distance of binarized matrices; a reversal costs 2
    ReversalAsOne, // each mismatched off-diagonal pair {i, j} costs 1
};

Eigen::MatrixXi binarize(const Matrix& a, double edge_eps = kDefaultEdgeEps);

std::size_t shd(const Matrix& a_hat, const Matrix& a_true, double edge_eps = kDefaultEdgeEps,
                ShdConvention convention = ShdConvention::Entrywise);

double a_err(const Matrix& a_hat, const Matrix& a_true);
double nu_err(const Vector& nu_hat, const Vector& nu_true);

struct RecoveryMetrics {
    double a_err = 0.0;
    double nu_err = 0.0;
    double dagness = 0.0;
    std::size_t shd = 0;
};

// Metrics summed (SHD) or stacked (A-err) over every lag.
RecoveryMetrics evaluate(const ParamMatrix& estimate, const ParamMatrix& truth,
                         double edge_eps = kDefaultEdgeEps,
                         ShdConvention convention = ShdConvention::Entrywise);

} // namespace cvdag
