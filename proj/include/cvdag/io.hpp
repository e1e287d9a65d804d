#pragma once

// File formats: panel CSV, ground-truth / fit / bound-report JSON, sweep CSV.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvdag/graphgen.hpp"
#include "cvdag/selection.hpp"
#include "cvdag/solver.hpp"
#include "cvdag/theory.hpp"

namespace cvdag {

using Json = nlohmann::json;

// Header `t,node_1,...,node_d1`; one row per step t = 1-tau..T; values 0/1.
void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel);
// Memory depth is the number of rows with t <= 0. Throws ConfigError on malformed input.
TimeSeriesPanel read_panel_csv(std::istream& in);

// {nu, A: [lag][row][col], seed, d1, tau}
Json truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const Json& j);

Json solver_config_to_json(const SolverConfig& config);

// {theta_hat: row-major rows, iterations, final_field_norm, d1, tau, config}
Json fit_to_json(const FitResult& result, const SolverConfig& config);
ParamMatrix theta_from_fit_json(const Json& j);

Json bound_report_to_json(const BoundReport& report);

// Columns lambda,h,A_err,nu_err,shd,field_norm,selected. Unevaluated or
// diverged points leave their metric cells empty.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

} // namespace cvdag
