#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvdag/model.hpp"

namespace cvdag {

// e^A by scaling and squaring around a truncated Taylor series.
// The series order adapts until the next term is below `tol` relative to the sum.
Matrix matrix_exp(const Matrix& a, double tol = 1e-16);

// h(A) = tr(e^A) - d1. Zero exactly when the support of A is acyclic.
double dagness(const Matrix& a);

// grad h(A) = (e^A)'.
Matrix dagness_grad(const Matrix& a);

// Sum over lags of h(A_lag); equals h(A_1) for memory depth 1.
double total_dagness(const ParamMatrix& params);

struct PairCycle {
    std::size_t i = 0;  // i < j
    std::size_t j = 0;
    double strength = 0.0;  // delta_2 = max(alpha_ij, alpha_ji)
};

// Directed triangle i -> k -> j -> i in terms of weights alpha_ij, alpha_jk, alpha_ki.
// Stored with i the smallest index; the two orientations are distinct cycles.
struct TriangleCycle {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    double strength = 0.0;  // delta_3 = sum of the three weights minus their minimum
};

struct LagCycles {
    std::vector<std::size_t> self_loops;
    std::vector<PairCycle> pairs;
    std::vector<TriangleCycle> triangles;
};

struct CycleSets {
    std::size_t n_nodes = 0;
    double edge_eps = kDefaultEdgeEps;
    std::vector<LagCycles> lags;       // index 0 is lag 1
    std::vector<Matrix> pilot_alpha;   // pilot A_lag the sets were built from

    bool has_self_loop(std::size_t lag, std::size_t node) const;
    std::size_t size() const;
};

CycleSets enumerate_cycles(const ParamMatrix& pilot, double edge_eps = kDefaultEdgeEps);

enum class RowNormalization {
    // nu_i + sum_{j,l} alpha_ijl = 1 before sparsifying, so the linear link is
    // feasible for every draw
    WithBackground,
    // only the adjacency rows sum to one; nu stays U[0, 1]
    AdjacencyOnly,
};

struct GroundTruthOptions {
    RowNormalization normalization = RowNormalization::WithBackground;
    double sparsify_quantile = 0.95;
    double gd_lr = 0.5;
    std::size_t gd_iters = 5000;
    double dag_tol = 1e-10;
    // Weakest-edge removals before drawing a fresh instance.
    std::size_t max_prunes = 16;
    std::size_t max_attempts = 1000;
    // Redraw until nu_i + sum_j,l alpha_ijl <= 1 for every node, so the
    // linear link is feasible on any data.
    bool require_linear_feasible = false;
};

struct GroundTruth {
    ParamMatrix params;
    std::uint64_t seed = 0;
    std::size_t attempt = 0;  // 0 when `seed` itself produced the instance

    std::vector<Matrix> adjacency() const;
};

// Row-normalized uniform weights, sparsified at a quantile and made acyclic by
// projected gradient descent on h(A_lag).
GroundTruth generate_ground_truth(std::size_t n_nodes, std::size_t memory, std::uint64_t seed,
                                  const GroundTruthOptions& options = {});

// Entries of `values` at the given quantile, linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

} // namespace cvdag
