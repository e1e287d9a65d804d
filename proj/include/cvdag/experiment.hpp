#pragma once

// Monte-Carlo harness: random DAG ground truth -> simulated panel -> fits under
// each regularizer with lambda selected by the DAG-ness threshold -> metrics.
// Trial t of a run seeded with s uses seed s XOR t.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvdag/graphgen.hpp"
#include "cvdag/metrics.hpp"
#include "cvdag/selection.hpp"

namespace cvdag {

struct TrialConfig {
    std::size_t n_nodes = 10;
    std::size_t memory = 1;
    std::size_t horizon = 500;
    Link link{LinkKind::Linear};
    HistoryPolicy history = HistoryPolicy::Stationary;
    GroundTruthOptions generator;
    SolverConfig solver;
    SweepOptions sweep;  // grid, thres, floor, edge_eps, SHD convention
};

struct TrialData {
    GroundTruth truth;
    TimeSeriesPanel panel;
};

// Ground truth and panel for one trial seed. Linear-link trials redraw the
// truth until it is feasible on any data.
TrialData make_trial(const TrialConfig& config, std::uint64_t seed);

struct MethodOutcome {
    PenaltyKind kind = PenaltyKind::None;
    double thres = 0.0;
    double lambda = 0.0;
    bool qualified = true;
    RecoveryMetrics metrics;
    double field_norm = 0.0;
    bool failed = false;
    std::string failure;
};

struct TrialOutcome {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::vector<MethodOutcome> methods;
};

// Unpenalized pilot is shared: PenaltyKind::None reports it directly.
TrialOutcome run_trial(const TrialConfig& config, const std::vector<PenaltyKind>& methods,
                       std::uint64_t seed, std::size_t index);

// One full lambda sweep of `kind`, then selection at every threshold.
TrialOutcome run_threshold_trial(const TrialConfig& config, PenaltyKind kind,
                                 const std::vector<double>& thresholds, std::uint64_t seed,
                                 std::size_t index);

// Trials 0..n-1 in parallel on `jobs` threads (0 = all available).
std::vector<TrialOutcome> run_trials(const TrialConfig& config, const std::vector<PenaltyKind>& methods,
                                     std::size_t n_trials, std::uint64_t seed, std::size_t jobs);
std::vector<TrialOutcome> run_threshold_trials(const TrialConfig& config, PenaltyKind kind,
                                               const std::vector<double>& thresholds,
                                               std::size_t n_trials, std::uint64_t seed,
                                               std::size_t jobs);

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation
};
Summary summarize(const std::vector<double>& values);

struct MethodAggregate {
    PenaltyKind kind = PenaltyKind::None;
    double thres = 0.0;
    std::size_t n = 0;       // successful trials
    std::size_t failed = 0;
    Summary a_err, nu_err, dagness, shd;
};

// Groups outcomes by (method, thres) in first-seen order.
std::vector<MethodAggregate> aggregate(const std::vector<TrialOutcome>& outcomes);

std::string trial_csv_header();
void write_trial_rows(std::ostream& out, const std::string& setting, const TrialConfig& config,
                      const std::vector<TrialOutcome>& outcomes);
std::string aggregate_csv_header();
void write_aggregate_rows(std::ostream& out, const std::string& setting, const TrialConfig& config,
                          const std::vector<MethodAggregate>& aggregates);

} // namespace cvdag
