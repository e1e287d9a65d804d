#include "cvdag/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "cvdag/error.hpp"

namespace cvdag {

void write_panel_csv(std::ostream& out, const TimeSeriesPanel& panel) {
    out << 't';
    for (std::size_t i = 1; i <= panel.n_nodes(); ++i) out << ",node_" << i;
    out << '\n';
    for (long t = panel.first_time(); t <= static_cast<long>(panel.horizon()); ++t) {
        out << t;
        for (std::size_t i = 0; i < panel.n_nodes(); ++i) out << ',' << panel.at(i, t);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

long parse_long(const std::string& s, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("panel csv line " + std::to_string(line_no) + ": bad time index '" + s + "'");
}

} // namespace

TimeSeriesPanel read_panel_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("panel csv: empty input");
    const auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "t") throw ConfigError("panel csv: header must start with 't'");
    const std::size_t d1 = header.size() - 1;
    for (std::size_t i = 1; i <= d1; ++i) {
        if (header[i] != "node_" + std::to_string(i)) {
            throw ConfigError("panel csv: expected column node_" + std::to_string(i));
        }
    }

    std::vector<long> times;
    std::vector<std::vector<std::uint8_t>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv(line);
        if (cells.size() != d1 + 1) {
            throw ConfigError("panel csv line " + std::to_string(line_no) + ": wrong number of columns");
        }
        times.push_back(parse_long(cells[0], line_no));
        std::vector<std::uint8_t> row(d1);
        for (std::size_t i = 0; i < d1; ++i) {
            if (cells[i + 1] != "0" && cells[i + 1] != "1") {
                throw ConfigError("panel csv line " + std::to_string(line_no) + ": values must be 0 or 1");
            }
            row[i] = cells[i + 1] == "1";
        }
        rows.push_back(std::move(row));
    }

    std::size_t memory = 0;
    for (long t : times) memory += t <= 0;
    const std::size_t horizon = times.size() - memory;
    if (memory == 0 || horizon == 0) throw ConfigError("panel csv: need history rows (t <= 0) and events (t >= 1)");
    TimeSeriesPanel panel(d1, memory, horizon);
    for (std::size_t r = 0; r < times.size(); ++r) {
        if (times[r] != panel.first_time() + static_cast<long>(r)) {
            throw ConfigError("panel csv: time index must run consecutively from 1-tau to T");
        }
        for (std::size_t i = 0; i < d1; ++i) panel.set(i, times[r], rows[r][i] != 0);
    }
    return panel;
}

namespace {

Json matrix_rows(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_rows(const Json& rows, Eigen::Index n_rows, Eigen::Index n_cols, const char* what) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows) {
        throw ConfigError(std::string(what) + ": wrong number of rows");
    }
    Matrix m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        const Json& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
            throw ConfigError(std::string(what) + ": wrong number of columns");
        }
        for (Eigen::Index c = 0; c < n_cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
}

template <typename T>
T required(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

} // namespace

Json truth_to_json(const GroundTruth& truth) {
    Json j;
    j["nu"] = Json::array();
    for (std::size_t i = 0; i < truth.params.n_nodes(); ++i) j["nu"].push_back(truth.params.background(i));
    j["A"] = Json::array();
    for (const Matrix& a : truth.adjacency()) j["A"].push_back(matrix_rows(a));
    j["seed"] = truth.seed;
    j["d1"] = truth.params.n_nodes();
    j["tau"] = truth.params.memory();
    return j;
}

GroundTruth truth_from_json(const Json& j) {
    const auto d1 = required<std::size_t>(j, "d1");
    const auto tau = required<std::size_t>(j, "tau");
    const auto nu = required<std::vector<double>>(j, "nu");
    if (nu.size() != d1) throw ConfigError("truth: nu must have d1 entries");
    if (!j.contains("A") || !j["A"].is_array() || j["A"].size() != tau) {
        throw ConfigError("truth: A must hold tau matrices");
    }
    GroundTruth truth;
    truth.seed = j.value("seed", std::uint64_t{0});
    truth.params = ParamMatrix(d1, tau);
    for (std::size_t i = 0; i < d1; ++i) truth.params.background(i) = nu[i];
    for (std::size_t lag = 1; lag <= tau; ++lag) {
        const auto n = static_cast<Eigen::Index>(d1);
        set_lag_matrix(truth.params, lag, matrix_from_rows(j["A"][lag - 1], n, n, "truth A"));
    }
    return truth;
}

Json solver_config_to_json(const SolverConfig& config) {
    Json j;
    j["initial_lr"] = config.initial_lr;
    j["halve_every"] = config.halve_every;
    j["total_iters"] = config.total_iters;
    j["convergence_tol"] = config.convergence_tol ? Json(*config.convergence_tol) : Json(nullptr);
    if (const auto* u = std::get_if<InitUniform>(&config.init)) {
        j["init"] = {{"kind", "uniform"}, {"lo", u->lo}, {"hi", u->hi}, {"seed", u->seed}};
    } else if (std::holds_alternative<InitWarm>(config.init)) {
        j["init"] = {{"kind", "warm"}};
    } else {
        j["init"] = {{"kind", "zeros"}};
    }
    j["divergence_limit"] = config.divergence_limit;
    return j;
}

Json fit_to_json(const FitResult& result, const SolverConfig& config) {
    Json j;
    j["theta_hat"] = matrix_rows(result.theta_hat.values());
    j["iterations"] = result.iterations_run;
    j["final_field_norm"] = result.final_field_norm;
    j["d1"] = result.theta_hat.n_nodes();
    j["tau"] = result.theta_hat.memory();
    j["config"] = solver_config_to_json(config);
    return j;
}

ParamMatrix theta_from_fit_json(const Json& j) {
    const auto d1 = required<std::size_t>(j, "d1");
    const auto tau = required<std::size_t>(j, "tau");
    if (!j.contains("theta_hat")) throw ConfigError("missing field 'theta_hat'");
    const auto d = static_cast<Eigen::Index>(ParamMatrix::dimension(d1, tau));
    return ParamMatrix(d1, tau, matrix_from_rows(j["theta_hat"], d, static_cast<Eigen::Index>(d1), "theta_hat"));
}

Json bound_report_to_json(const BoundReport& r) {
    return {{"node", r.node},
            {"lambda1", r.lambda1},
            {"m_g", r.m_g},
            {"eps", r.eps},
            {"bound_l2", r.bound_l2},
            {"bound_inf_delta", r.bound_inf_delta},
            {"delta_inf", r.delta_inf},
            {"empirical_err", r.empirical_err},
            {"covered", r.covered},
            {"delta_covered", r.delta_covered}};
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "lambda,h,A_err,nu_err,shd,field_norm,selected\n";
    out.precision(10);
    for (const SweepPoint& p : sweep.points) {
        out << p.lambda << ',';
        const bool ok = p.evaluated && !p.diverged;
        if (ok) out << p.dagness;
        out << ',';
        if (ok && p.metrics) out << p.metrics->a_err << ',' << p.metrics->nu_err << ',' << p.metrics->shd;
        else out << ",,";
        out << ',';
        if (ok) out << p.field_norm;
        out << ',' << (p.selected ? 1 : 0) << '\n';
    }
}

} // namespace cvdag
