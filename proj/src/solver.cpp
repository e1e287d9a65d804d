#include "cvdag/solver.hpp"

#include <cmath>

#include "cvdag/error.hpp"

namespace cvdag {

void SolverConfig::validate() const {
    if (!(initial_lr > 0.0)) throw ConfigError("solver: initial_lr must be > 0");
    if (total_iters < 1) throw ConfigError("solver: total_iters must be >= 1");
    if (halve_every < 1) throw ConfigError("solver: halve_every must be >= 1");
    if (convergence_tol && !(*convergence_tol > 0.0)) throw ConfigError("solver: convergence_tol must be > 0");
    if (const auto* u = std::get_if<InitUniform>(&init); u && !(u->lo >= 0.0 && u->hi >= u->lo)) {
        throw ConfigError("solver: uniform init needs 0 <= lo <= hi");
    }
}

double SolverConfig::learning_rate(std::size_t iteration) const {
    return std::ldexp(initial_lr, -static_cast<int>(iteration / halve_every));
}

Matrix project(const Matrix& theta) { return theta.cwiseMax(0.0); }

ParamMatrix initial_point(const SolverConfig& config, std::size_t n_nodes, std::size_t memory) {
    ParamMatrix theta(n_nodes, memory);
    if (const auto* u = std::get_if<InitUniform>(&config.init)) {
        Rng rng(u->seed);
        std::uniform_real_distribution<double> dist(u->lo, u->hi);
        Matrix& v = theta.values();
        for (Eigen::Index c = 0; c < v.cols(); ++c)
            for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, c) = dist(rng);
    } else if (const auto* w = std::get_if<InitWarm>(&config.init)) {
        if (w->start.n_nodes() != n_nodes || w->start.memory() != memory) {
            throw ConfigError("solver: warm start has the wrong shape");
        }
        theta.values() = project(w->start.values());
    }
    return theta;
}

namespace {

void guard(const Matrix& field, const Matrix& theta, double limit, std::size_t iteration) {
    if (!field.allFinite()) throw DivergenceError("non-finite vector field", iteration);
    if (theta.cwiseAbs().maxCoeff() > limit) throw DivergenceError("parameter magnitude exceeded limit", iteration);
}

} // namespace

FitResult fit(const Design& design, const Link& link, const PenaltySpec& penalty,
              const SolverConfig& config) {
    config.validate();
    const FieldOperator field(design, link, penalty, config.execution);

    FitResult result;
    result.theta_hat = initial_point(config, design.n_nodes, design.memory);
    Matrix& theta = result.theta_hat.values();

    for (std::size_t k = 0; k < config.total_iters; ++k) {
        const double lr = config.learning_rate(k);
        const Matrix f = field(result.theta_hat);
        Matrix next = project(theta - lr * f);
        guard(f, next, config.divergence_limit, k);
        const double step = (next - theta).norm();
        theta = std::move(next);
        result.iterations_run = k + 1;
        if (config.record_trajectory) {
            result.trajectory.push_back({k, lr, f.norm(), step, total_dagness(result.theta_hat)});
        }
        if (config.convergence_tol && step < *config.convergence_tol) break;
    }
    result.final_field_norm = field(result.theta_hat).norm();
    return result;
}

FitResult fit_decoupled(const Design& design, const Link& link, const SolverConfig& config) {
    config.validate();
    FitResult result;
    result.theta_hat = initial_point(config, design.n_nodes, design.memory);
    Matrix& theta = result.theta_hat.values();
    const auto d1 = static_cast<Eigen::Index>(design.n_nodes);
    std::vector<std::size_t> iterations(design.n_nodes, 0);
    std::vector<std::optional<DivergenceError>> failures(design.n_nodes);

#pragma omp parallel for schedule(dynamic) if (config.execution == Execution::Parallel)
    for (Eigen::Index i = 0; i < d1; ++i) {
        Vector column = theta.col(i);
        try {
            for (std::size_t k = 0; k < config.total_iters; ++k) {
                const Vector f = empirical_field(column, static_cast<std::size_t>(i), design, link,
                                                 Feasibility::Relaxed);
                Vector next = (column - config.learning_rate(k) * f).cwiseMax(0.0);
                guard(f, next, config.divergence_limit, k);
                const double step = (next - column).norm();
                column = std::move(next);
                iterations[static_cast<std::size_t>(i)] = k + 1;
                if (config.convergence_tol && step < *config.convergence_tol) break;
            }
        } catch (const DivergenceError& e) {
            failures[static_cast<std::size_t>(i)] = e;
        }
        theta.col(i) = column;
    }
    for (const auto& f : failures)
        if (f) throw *f;

    for (std::size_t n : iterations) result.iterations_run = std::max(result.iterations_run, n);
    const FieldOperator field(design, link, PenaltySpec::none());
    result.final_field_norm = field(result.theta_hat).norm();
    return result;
}

} // namespace cvdag
