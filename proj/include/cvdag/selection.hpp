#pragma once

// Penalty-strength selection: fit over an ascending lambda grid and keep the
// smallest lambda whose estimate satisfies h(A) <= thres.

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cvdag/fields.hpp"
#include "cvdag/metrics.hpp"
#include "cvdag/solver.hpp"

namespace cvdag {

std::vector<double> log_grid(double lo, double hi, std::size_t count);

// 40 log-spaced points in [1e-5, 10].
std::vector<double> default_lambda_grid();

// Unpenalized estimate whose lag weights seed the adaptive penalties.
ParamMatrix pilot_estimate(const Design& design, const Link& link, const SolverConfig& config);

PenaltySpec make_penalty(PenaltyKind kind, double lambda, const ParamMatrix& pilot,
                         double floor = 1e-3, double edge_eps = kDefaultEdgeEps);

struct SweepOptions {
    std::vector<double> grid = default_lambda_grid();
    double thres = 1e-4;
    bool early_exit = true;
    bool warm_start = false;
    double floor = 1e-3;
    double edge_eps = kDefaultEdgeEps;
    ShdConvention shd_convention = ShdConvention::Entrywise;
    std::optional<ParamMatrix> truth;  // enables A-err, nu-err and SHD per point
    std::optional<ParamMatrix> pilot;  // external pilot; fitted when absent
    Execution execution = Execution::Serial;  // grid points in parallel (full sweep only)
};

struct SweepPoint {
    double lambda = 0.0;
    bool evaluated = false;
    bool diverged = false;
    std::string failure;
    double dagness = std::numeric_limits<double>::quiet_NaN();
    double field_norm = std::numeric_limits<double>::quiet_NaN();
    std::optional<RecoveryMetrics> metrics;
    std::optional<ParamMatrix> theta_hat;
    bool selected = false;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::size_t selected_index = 0;
    double selected_lambda = 0.0;
    bool qualified = false;  // false: no point reached thres, the largest usable lambda was taken
    ParamMatrix pilot;

    const SweepPoint& selected() const { return points.at(selected_index); }
};

SweepResult lambda_sweep(const Design& design, const Link& link, PenaltyKind kind,
                         const SolverConfig& config, const SweepOptions& options = {});

// Smallest evaluated lambda with h <= thres, else the largest usable one.
// Returns the index and whether the threshold was met.
std::pair<std::size_t, bool> select_lambda(const std::vector<SweepPoint>& points, double thres);

} // namespace cvdag
