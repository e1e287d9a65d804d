#include "cvdag/selection.hpp"

#include <algorithm>
#include <cmath>

#include "cvdag/error.hpp"

namespace cvdag {

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (count == 0 || !(lo > 0.0) || !(hi >= lo)) throw ConfigError("log_grid: need 0 < lo <= hi, count >= 1");
    std::vector<double> grid(count);
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
    return grid;
}

std::vector<double> default_lambda_grid() { return log_grid(1e-5, 10.0, 40); }

ParamMatrix pilot_estimate(const Design& design, const Link& link, const SolverConfig& config) {
    return fit(design, link, PenaltySpec::none(), config).theta_hat;
}

PenaltySpec make_penalty(PenaltyKind kind, double lambda, const ParamMatrix& pilot, double floor,
                         double edge_eps) {
    switch (kind) {
    case PenaltyKind::None: return PenaltySpec::none();
    case PenaltyKind::AdaptiveLinear:
        return PenaltySpec::adaptive_linear(lambda, enumerate_cycles(pilot, edge_eps), floor);
    case PenaltyKind::Dag: return PenaltySpec::dag(lambda);
    case PenaltyKind::L1: return PenaltySpec::l1(lambda);
    case PenaltyKind::AdaptiveL1: return PenaltySpec::adaptive_l1(lambda, pilot, floor, edge_eps);
    }
    return {};
}

std::pair<std::size_t, bool> select_lambda(const std::vector<SweepPoint>& points, double thres) {
    std::optional<std::size_t> largest;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const SweepPoint& p = points[k];
        if (!p.evaluated || p.diverged) continue;
        if (p.dagness <= thres) return {k, true};
        largest = k;
    }
    if (!largest) throw Error("lambda sweep: no grid point produced an estimate");
    return {*largest, false};
}

namespace {

void evaluate_point(SweepPoint& point, const Design& design, const Link& link, PenaltySpec spec,
                    const SolverConfig& config, const SweepOptions& options) {
    point.evaluated = true;
    try {
        FitResult fitted = fit(design, link, spec, config);
        point.dagness = total_dagness(fitted.theta_hat);
        point.field_norm = fitted.final_field_norm;
        if (options.truth) {
            point.metrics = evaluate(fitted.theta_hat, *options.truth, options.edge_eps, options.shd_convention);
        }
        point.theta_hat = std::move(fitted.theta_hat);
    } catch (const DivergenceError& e) {
        point.diverged = true;
        point.failure = e.what();
    }
}

} // namespace

SweepResult lambda_sweep(const Design& design, const Link& link, PenaltyKind kind,
                         const SolverConfig& config, const SweepOptions& options) {
    if (options.grid.empty()) throw ConfigError("lambda sweep: empty grid");
    if (!std::is_sorted(options.grid.begin(), options.grid.end())) {
        throw ConfigError("lambda sweep: grid must be ascending");
    }
    if (!(options.thres > 0.0)) throw ConfigError("lambda sweep: thres must be > 0");

    SweepResult result;
    result.pilot = options.pilot ? *options.pilot : pilot_estimate(design, link, config);
    // cycle sets do not depend on lambda; build them once
    const PenaltySpec base = make_penalty(kind, 0.0, result.pilot, options.floor, options.edge_eps);

    result.points.resize(options.grid.size());
    for (std::size_t k = 0; k < options.grid.size(); ++k) result.points[k].lambda = options.grid[k];

    auto spec_at = [&](std::size_t k) {
        PenaltySpec spec = base;
        spec.lambda = options.grid[k];
        return spec;
    };

    const bool sequential = options.early_exit || options.warm_start ||
                            options.execution == Execution::Serial;
    if (sequential) {
        SolverConfig cfg = config;
        for (std::size_t k = 0; k < options.grid.size(); ++k) {
            SweepPoint& point = result.points[k];
            evaluate_point(point, design, link, spec_at(k), cfg, options);
            if (options.warm_start && point.theta_hat) cfg.init = InitWarm{*point.theta_hat};
            if (options.early_exit && !point.diverged && point.dagness <= options.thres) break;
        }
    } else {
        const auto n = static_cast<long>(options.grid.size());
#pragma omp parallel for schedule(dynamic)
        for (long k = 0; k < n; ++k) {
            const auto idx = static_cast<std::size_t>(k);
            evaluate_point(result.points[idx], design, link, spec_at(idx), config, options);
        }
    }

    const auto [index, qualified] = select_lambda(result.points, options.thres);
    result.selected_index = index;
    result.qualified = qualified;
    result.selected_lambda = result.points[index].lambda;
    result.points[index].selected = true;
    return result;
}

} // namespace cvdag
