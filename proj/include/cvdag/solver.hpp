#pragma once

// Projected gradient descent on a (penalized) vector field:
//
//   theta <- max(theta - eta_k F(theta), 0),   eta_k = lr * 2^-floor(k / halve_every)
//
// The nonnegativity projection is the only constraint; the linear link's
// w'theta <= 1 is relaxed while fitting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cvdag/fields.hpp"

namespace cvdag {

struct InitZeros {};
struct InitUniform {
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t seed = 0;
};
struct InitWarm {
    ParamMatrix start;
};
using Initialization = std::variant<InitZeros, InitUniform, InitWarm>;

struct SolverConfig {
    double initial_lr = 5e-3;
    std::size_t halve_every = 2000;
    std::size_t total_iters = 6000;
    std::optional<double> convergence_tol;  // early stop on ||step||_F
    Initialization init = InitZeros{};
    bool record_trajectory = false;
    double divergence_limit = 1e6;
    Execution execution = Execution::Serial;

    void validate() const;
    double learning_rate(std::size_t iteration) const;
};

struct TrajectoryPoint {
    std::size_t iteration = 0;
    double learning_rate = 0.0;
    double field_norm = 0.0;  // at the iterate before the update
    double step_norm = 0.0;
    double dagness = 0.0;     // sum over lags of h(A_lag) after the update
};

struct FitResult {
    ParamMatrix theta_hat;
    std::size_t iterations_run = 0;
    double final_field_norm = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

Matrix project(const Matrix& theta);

ParamMatrix initial_point(const SolverConfig& config, std::size_t n_nodes, std::size_t memory);

FitResult fit(const Design& design, const Link& link, const PenaltySpec& penalty,
              const SolverConfig& config);

// Unpenalized fit run node by node. Matches the joint unpenalized fit when
// convergence_tol is unset; with it set each column stops on its own step norm.
// Columns run concurrently under Execution::Parallel.
FitResult fit_decoupled(const Design& design, const Link& link, const SolverConfig& config);

} // namespace cvdag
