#include "cvdag/graphgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvdag/error.hpp"

namespace cvdag {

Matrix matrix_exp(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) throw ShapeError("matrix_exp: matrix must be square");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;

    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Matrix scaled = a * std::ldexp(1.0, -squarings);

    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() <= tol * sum.cwiseAbs().maxCoeff()) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

namespace {

void require_nonnegative_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols()) throw ShapeError(std::string(what) + ": matrix must be square");
    if ((a.array() < 0.0).any()) throw DomainError(std::string(what) + ": negative entry");
}

} // namespace

double dagness(const Matrix& a) {
    require_nonnegative_square(a, "dagness");
    return matrix_exp(a).trace() - static_cast<double>(a.rows());
}

Matrix dagness_grad(const Matrix& a) {
    require_nonnegative_square(a, "dagness_grad");
    return matrix_exp(a).transpose();
}

double total_dagness(const ParamMatrix& params) {
    double h = 0.0;
    for (std::size_t lag = 1; lag <= params.memory(); ++lag) h += dagness(extract_lag_matrix(params, lag));
    return h;
}

bool CycleSets::has_self_loop(std::size_t lag, std::size_t node) const {
    const auto& loops = lags.at(lag - 1).self_loops;
    return std::find(loops.begin(), loops.end(), node) != loops.end();
}

std::size_t CycleSets::size() const {
    std::size_t n = 0;
    for (const auto& l : lags) n += l.self_loops.size() + l.pairs.size() + l.triangles.size();
    return n;
}

CycleSets enumerate_cycles(const ParamMatrix& pilot, double edge_eps) {
    CycleSets sets;
    sets.n_nodes = pilot.n_nodes();
    sets.edge_eps = edge_eps;
    const std::size_t d1 = pilot.n_nodes();
    for (std::size_t lag = 1; lag <= pilot.memory(); ++lag) {
        const Matrix a = extract_lag_matrix(pilot, lag);
        auto edge = [&](std::size_t i, std::size_t j) {
            return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        };
        auto present = [&](std::size_t i, std::size_t j) { return edge(i, j) > edge_eps; };

        LagCycles cycles;
        for (std::size_t i = 0; i < d1; ++i) {
            if (present(i, i)) cycles.self_loops.push_back(i);
        }
        for (std::size_t i = 0; i < d1; ++i) {
            for (std::size_t j = i + 1; j < d1; ++j) {
                if (present(i, j) && present(j, i)) {
                    const double sum = edge(i, j) + edge(j, i);
                    cycles.pairs.push_back({i, j, sum - std::min(edge(i, j), edge(j, i))});
                }
            }
        }
        for (std::size_t i = 0; i < d1; ++i) {
            for (std::size_t j = i + 1; j < d1; ++j) {
                for (std::size_t k = i + 1; k < d1; ++k) {
                    if (k == j || !present(i, j) || !present(j, k) || !present(k, i)) continue;
                    const double sum = edge(i, j) + edge(j, k) + edge(k, i);
                    const double weakest = std::min({edge(i, j), edge(j, k), edge(k, i)});
                    cycles.triangles.push_back({i, j, k, sum - weakest});
                }
            }
        }
        sets.lags.push_back(std::move(cycles));
        sets.pilot_alpha.push_back(a);
    }
    return sets;
}

std::vector<Matrix> GroundTruth::adjacency() const {
    std::vector<Matrix> out;
    for (std::size_t lag = 1; lag <= params.memory(); ++lag) out.push_back(extract_lag_matrix(params, lag));
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw ConfigError("quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

// Projected GD on h; stops early once the support is acyclic (gradient vanishes there).
double descend_dagness(Matrix& a, const GroundTruthOptions& opt) {
    double h = dagness(a);
    for (std::size_t it = 0; it < opt.gd_iters && h > 0.0; ++it) {
        a = (a - opt.gd_lr * dagness_grad(a)).cwiseMax(0.0);
        h = dagness(a);
    }
    return h;
}

void prune_weakest(Matrix& a) {
    double weakest = 0.0;
    Eigen::Index wi = -1, wj = -1;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) > 0.0 && (wi < 0 || a(i, j) < weakest)) {
                weakest = a(i, j);
                wi = i;
                wj = j;
            }
    if (wi >= 0) a(wi, wj) = 0.0;
}

bool try_generate(std::size_t d1, std::size_t tau, std::uint64_t seed,
                  const GroundTruthOptions& opt, ParamMatrix& out) {
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(d1);

    ParamMatrix params(d1, tau);
    for (std::size_t i = 0; i < d1; ++i) params.background(i) = unit(rng);

    std::vector<Matrix> lags(tau, Matrix(n, n));
    for (auto& a : lags)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) a(i, j) = unit(rng);

    // normalize each node's row of theta' (over all lags) to sum to one
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto node = static_cast<std::size_t>(i);
        double row = 0.0;
        for (const auto& a : lags) row += a.row(i).sum();
        if (opt.normalization == RowNormalization::WithBackground) row += params.background(node);
        for (auto& a : lags) a.row(i) /= row;
        if (opt.normalization == RowNormalization::WithBackground) params.background(node) /= row;
    }

    std::vector<double> pooled;
    for (const auto& a : lags) pooled.insert(pooled.end(), a.data(), a.data() + a.size());
    const double cut = quantile(pooled, opt.sparsify_quantile);
    for (auto& a : lags) a = (a.array() < cut).select(0.0, a);

    for (auto& a : lags) {
        double h = descend_dagness(a, opt);
        for (std::size_t p = 0; h > opt.dag_tol && p < opt.max_prunes; ++p) {
            prune_weakest(a);
            h = descend_dagness(a, opt);
        }
        if (!(h <= opt.dag_tol)) return false;
    }

    for (std::size_t lag = 1; lag <= tau; ++lag) set_lag_matrix(params, lag, lags[lag - 1]);
    if (opt.require_linear_feasible && worst_case_activation(params) > 1.0) return false;
    out = std::move(params);
    return true;
}

} // namespace

GroundTruth generate_ground_truth(std::size_t n_nodes, std::size_t memory, std::uint64_t seed,
                                  const GroundTruthOptions& options) {
    if (n_nodes < 2) throw ConfigError("generate_ground_truth: need at least 2 nodes");
    if (memory < 1) throw ConfigError("generate_ground_truth: memory must be >= 1");
    GroundTruth truth;
    truth.seed = seed;
    for (std::size_t attempt = 0; attempt < std::max<std::size_t>(options.max_attempts, 1); ++attempt) {
        const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
        if (try_generate(n_nodes, memory, s, options, truth.params)) {
            truth.attempt = attempt;
            return truth;
        }
    }
    throw GenerationError("generate_ground_truth: retry budget exhausted for seed " +
                          std::to_string(seed));
}

} // namespace cvdag
