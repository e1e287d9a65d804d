#include "cvdag/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cvdag/error.hpp"
#include "cvdag/rng.hpp"

namespace cvdag {

namespace {

constexpr std::uint64_t kTruthStream = 1;
constexpr std::uint64_t kPanelStream = 2;

} // namespace

TrialData make_trial(const TrialConfig& config, std::uint64_t seed) {
    GroundTruthOptions gen = config.generator;
    if (config.link.kind() == LinkKind::Linear) gen.require_linear_feasible = true;
    TrialData data;
    data.truth = generate_ground_truth(config.n_nodes, config.memory, derive_seed(seed, kTruthStream), gen);
    data.panel = simulate(data.truth.params, config.link, config.horizon, derive_seed(seed, kPanelStream),
                          config.history);
    return data;
}

namespace {

MethodOutcome failed_outcome(PenaltyKind kind, double thres, const std::exception& e) {
    MethodOutcome m;
    m.kind = kind;
    m.thres = thres;
    m.failed = true;
    m.failure = e.what();
    return m;
}

MethodOutcome from_point(PenaltyKind kind, double thres, const SweepPoint& point, bool qualified) {
    MethodOutcome m;
    m.kind = kind;
    m.thres = thres;
    m.lambda = point.lambda;
    m.qualified = qualified;
    m.metrics = *point.metrics;
    m.field_norm = point.field_norm;
    return m;
}

} // namespace

TrialOutcome run_trial(const TrialConfig& config, const std::vector<PenaltyKind>& methods,
                       std::uint64_t seed, std::size_t index) {
    TrialOutcome outcome;
    outcome.trial = index;
    outcome.seed = seed;
    const double thres = config.sweep.thres;
    try {
        const TrialData data = make_trial(config, seed);
        const Design design = Design::from_panel(data.panel);
        const ParamMatrix pilot = pilot_estimate(design, config.link, config.solver);

        for (PenaltyKind kind : methods) {
            try {
                if (kind == PenaltyKind::None) {
                    MethodOutcome m;
                    m.kind = kind;
                    m.thres = thres;
                    m.metrics = evaluate(pilot, data.truth.params, config.sweep.edge_eps, config.sweep.shd_convention);
                    m.field_norm = FieldOperator(design, config.link, PenaltySpec::none())(pilot).norm();
                    outcome.methods.push_back(m);
                    continue;
                }
                SweepOptions sweep = config.sweep;
                sweep.pilot = pilot;
                sweep.truth = data.truth.params;
                sweep.early_exit = true;
                sweep.execution = Execution::Serial;
                const SweepResult r = lambda_sweep(design, config.link, kind, config.solver, sweep);
                outcome.methods.push_back(from_point(kind, thres, r.selected(), r.qualified));
            } catch (const Error& e) {
                outcome.methods.push_back(failed_outcome(kind, thres, e));
            }
        }
    } catch (const Error& e) {
        for (PenaltyKind kind : methods) outcome.methods.push_back(failed_outcome(kind, thres, e));
    }
    return outcome;
}

TrialOutcome run_threshold_trial(const TrialConfig& config, PenaltyKind kind,
                                 const std::vector<double>& thresholds, std::uint64_t seed,
                                 std::size_t index) {
    TrialOutcome outcome;
    outcome.trial = index;
    outcome.seed = seed;
    try {
        const TrialData data = make_trial(config, seed);
        const Design design = Design::from_panel(data.panel);
        SweepOptions sweep = config.sweep;
        sweep.truth = data.truth.params;
        sweep.early_exit = false;
        sweep.execution = Execution::Serial;
        const SweepResult r = lambda_sweep(design, config.link, kind, config.solver, sweep);
        for (double thres : thresholds) {
            const auto [k, qualified] = select_lambda(r.points, thres);
            outcome.methods.push_back(from_point(kind, thres, r.points[k], qualified));
        }
    } catch (const Error& e) {
        for (double thres : thresholds) outcome.methods.push_back(failed_outcome(kind, thres, e));
    }
    return outcome;
}

namespace {

template <typename RunOne>
std::vector<TrialOutcome> parallel_trials(std::size_t n_trials, std::uint64_t seed, std::size_t jobs,
                                          RunOne run_one) {
    std::vector<TrialOutcome> outcomes(n_trials);
    const auto n = static_cast<long>(n_trials);
#ifdef _OPENMP
    const int threads = jobs == 0 ? omp_get_max_threads() : static_cast<int>(jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#else
    (void)jobs;
#endif
    for (long t = 0; t < n; ++t) {
        const auto idx = static_cast<std::size_t>(t);
        outcomes[idx] = run_one(trial_seed(seed, idx), idx);
    }
    return outcomes;
}

} // namespace

std::vector<TrialOutcome> run_trials(const TrialConfig& config, const std::vector<PenaltyKind>& methods,
                                     std::size_t n_trials, std::uint64_t seed, std::size_t jobs) {
    return parallel_trials(n_trials, seed, jobs, [&](std::uint64_t s, std::size_t i) {
        return run_trial(config, methods, s, i);
    });
}

std::vector<TrialOutcome> run_threshold_trials(const TrialConfig& config, PenaltyKind kind,
                                               const std::vector<double>& thresholds,
                                               std::size_t n_trials, std::uint64_t seed,
                                               std::size_t jobs) {
    return parallel_trials(n_trials, seed, jobs, [&](std::uint64_t s, std::size_t i) {
        return run_threshold_trial(config, kind, thresholds, s, i);
    });
}

Summary summarize(const std::vector<double>& values) {
    Summary s;
    if (values.empty()) {
        s.mean = s.stddev = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::vector<MethodAggregate> aggregate(const std::vector<TrialOutcome>& outcomes) {
    struct Columns {
        std::vector<double> a_err, nu_err, dagness, shd;
        std::size_t failed = 0;
    };
    std::vector<std::pair<PenaltyKind, double>> order;
    std::map<std::pair<PenaltyKind, double>, Columns> groups;
    for (const auto& trial : outcomes) {
        for (const auto& m : trial.methods) {
            const auto key = std::make_pair(m.kind, m.thres);
            if (!groups.count(key)) order.push_back(key);
            Columns& c = groups[key];
            if (m.failed) {
                ++c.failed;
                continue;
            }
            c.a_err.push_back(m.metrics.a_err);
            c.nu_err.push_back(m.metrics.nu_err);
            c.dagness.push_back(m.metrics.dagness);
            c.shd.push_back(static_cast<double>(m.metrics.shd));
        }
    }
    std::vector<MethodAggregate> out;
    for (const auto& key : order) {
        const Columns& c = groups[key];
        MethodAggregate a;
        a.kind = key.first;
        a.thres = key.second;
        a.n = c.shd.size();
        a.failed = c.failed;
        a.a_err = summarize(c.a_err);
        a.nu_err = summarize(c.nu_err);
        a.dagness = summarize(c.dagness);
        a.shd = summarize(c.shd);
        out.push_back(a);
    }
    return out;
}

namespace {

// Failure messages go inside one quoted CSV cell.
std::string csv_text(std::string s) {
    for (char& c : s)
        if (c == '"' || c == '\n' || c == '\r') c = '\'';
    return s;
}

} // namespace

std::string trial_csv_header() {
    return "setting,d1,T,link,trial,seed,method,thres,lambda,qualified,A_err,nu_err,h,shd,field_norm,failed,failure";
}

void write_trial_rows(std::ostream& out, const std::string& setting, const TrialConfig& config,
                      const std::vector<TrialOutcome>& outcomes) {
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& trial : outcomes) {
        for (const auto& m : trial.methods) {
            out << setting << ',' << config.n_nodes << ',' << config.horizon << ',' << config.link.name() << ','
                << trial.trial << ',' << trial.seed << ',' << penalty_name(m.kind) << ',' << m.thres << ',';
            if (m.failed) {
                out << ",,,,,,,1,\"" << csv_text(m.failure) << "\"\n";
                continue;
            }
            out << m.lambda << ',' << (m.qualified ? 1 : 0) << ',' << m.metrics.a_err << ',' << m.metrics.nu_err
                << ',' << m.metrics.dagness << ',' << m.metrics.shd << ',' << m.field_norm << ",0,\n";
        }
    }
}

std::string aggregate_csv_header() {
    return "setting,d1,T,link,method,thres,n,failed,A_err_mean,A_err_std,nu_err_mean,nu_err_std,h_mean,h_std,"
           "shd_mean,shd_std";
}

void write_aggregate_rows(std::ostream& out, const std::string& setting, const TrialConfig& config,
                          const std::vector<MethodAggregate>& aggregates) {
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& a : aggregates) {
        out << setting << ',' << config.n_nodes << ',' << config.horizon << ',' << config.link.name() << ','
            << penalty_name(a.kind) << ',' << a.thres << ',' << a.n << ',' << a.failed << ',' << a.a_err.mean
            << ',' << a.a_err.stddev << ',' << a.nu_err.mean << ',' << a.nu_err.stddev << ',' << a.dagness.mean
            << ',' << a.dagness.stddev << ',' << a.shd.mean << ',' << a.shd.stddev << '\n';
    }
}

} // namespace cvdag
