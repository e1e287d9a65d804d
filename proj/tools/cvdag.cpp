// Command-line driver: simulate panels, fit and sweep estimators, run the
// Monte-Carlo experiments, and score estimates against a ground truth.
//
// Exit codes: 0 ok, 2 configuration error, 3 divergence, 4 infeasibility.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cvdag/error.hpp"
#include "cvdag/experiment.hpp"
#include "cvdag/io.hpp"

namespace fs = std::filesystem;
using namespace cvdag;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kDivergence = 3;
constexpr int kInfeasible = 4;

struct Global {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t jobs = 0;
    std::string out_dir = ".";
};

struct SolverFlags {
    double lr = 5e-3;
    std::size_t halve_every = 2000;
    std::size_t iters = 6000;
    std::optional<double> tol;
    std::string init = "zeros";
    double init_hi = 0.1;

    void add(CLI::App* cmd) {
        cmd->add_option("--lr", lr, "initial learning rate")->capture_default_str();
        cmd->add_option("--halve-every", halve_every, "halve the learning rate every N iterations")
            ->capture_default_str();
        cmd->add_option("--iters", iters, "total PGD iterations")->capture_default_str();
        cmd->add_option("--tol", tol, "stop once ||step||_F < tol");
        cmd->add_option("--init", init, "zeros | uniform")->capture_default_str();
        cmd->add_option("--init-hi", init_hi, "upper end of the uniform initialization")->capture_default_str();
    }

    SolverConfig build(std::uint64_t seed, std::size_t jobs) const {
        SolverConfig c;
        c.initial_lr = lr;
        c.halve_every = halve_every;
        c.total_iters = iters;
        c.convergence_tol = tol;
        if (init == "uniform") c.init = InitUniform{0.0, init_hi, derive_seed(seed, 3)};
        else if (init != "zeros") throw ConfigError("unknown --init '" + init + "'");
        c.execution = jobs == 1 ? Execution::Serial : Execution::Parallel;
        c.validate();
        return c;
    }
};

struct GridFlags {
    double lo = 1e-5;
    double hi = 10.0;
    std::size_t n = 40;
    double thres = 1e-4;
    double floor = 1e-3;
    double edge_eps = kDefaultEdgeEps;
    std::string shd = "entrywise";

    void add(CLI::App* cmd) {
        cmd->add_option("--grid-lo", lo, "smallest lambda")->capture_default_str();
        cmd->add_option("--grid-hi", hi, "largest lambda")->capture_default_str();
        cmd->add_option("--grid-n", n, "number of log-spaced lambdas")->capture_default_str();
        cmd->add_option("--thres", thres, "DAG-ness threshold h(A) <= thres")->capture_default_str();
        cmd->add_option("--floor", floor, "Lambda, stands in for zero pilot weights")->capture_default_str();
        cmd->add_option("--edge-eps", edge_eps, "weights <= eps are absent edges")->capture_default_str();
        cmd->add_option("--shd", shd, "entrywise | reversal-as-one")->capture_default_str();
    }

    SweepOptions build() const {
        SweepOptions o;
        o.grid = log_grid(lo, hi, n);
        o.thres = thres;
        o.floor = floor;
        o.edge_eps = edge_eps;
        o.shd_convention = parse_shd(shd);
        return o;
    }

    static ShdConvention parse_shd(const std::string& name) {
        if (name == "entrywise") return ShdConvention::Entrywise;
        if (name == "reversal-as-one") return ShdConvention::ReversalAsOne;
        throw ConfigError("unknown --shd '" + name + "'");
    }
};

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return in;
}

Json read_json(const std::string& path) {
    auto in = open_in(path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

fs::path output_path(const Global& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

// Data files (truth, fits) hold matrices and are written compactly.
void write_json(const fs::path& path, const Json& j, bool compact = false) {
    std::ofstream out(path);
    out << j.dump(compact ? -1 : 2) << '\n';
    if (!out) throw Error("cannot write '" + path.string() + "'");
}

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config: bad field '") + key + "': " + e.what());
    }
}

HistoryPolicy parse_history(const std::string& s) {
    if (s == "stationary") return HistoryPolicy::Stationary;
    if (s == "zeros") return HistoryPolicy::Zeros;
    throw ConfigError("unknown history policy '" + s + "'");
}

std::string history_name(HistoryPolicy h) { return h == HistoryPolicy::Stationary ? "stationary" : "zeros"; }

Json metrics_json(const RecoveryMetrics& m) {
    return {{"A_err", m.a_err}, {"nu_err", m.nu_err}, {"h", m.dagness}, {"shd", m.shd}};
}

std::vector<PenaltyKind> parse_methods(const std::vector<std::string>& names) {
    std::vector<PenaltyKind> out;
    for (const auto& n : names) out.push_back(parse_penalty_kind(n));
    return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config;
};

int cmd_simulate(const Global& g, const SimulateArgs& a) {
    const Json cfg = read_json(a.config);
    TrialConfig trial;
    trial.n_nodes = field<std::size_t>(cfg, "d1");
    trial.memory = field<std::size_t>(cfg, "tau");
    trial.horizon = field<std::size_t>(cfg, "T");
    trial.link = Link::parse(field<std::string>(cfg, "link"));
    std::uint64_t seed = g.seed;
    if (cfg.contains("seed")) seed = field<std::uint64_t>(cfg, "seed");
    else if (!g.seed_given) throw ConfigError("config: missing field 'seed' (or pass --seed)");
    trial.history = parse_history(cfg.value("history", std::string("stationary")));
    if (cfg.value("normalization", std::string("with-background")) == "adjacency-only") {
        trial.generator.normalization = RowNormalization::AdjacencyOnly;
    }
    trial.generator.sparsify_quantile = cfg.value("sparsify_quantile", trial.generator.sparsify_quantile);
    if (trial.n_nodes < 2 || trial.memory < 1 || trial.horizon < 1) {
        throw ConfigError("config: need d1 >= 2, tau >= 1, T >= 1");
    }

    TrialData data;
    if (cfg.contains("truth")) {
        // simulate from a given truth instead of drawing one
        data.truth = truth_from_json(read_json(field<std::string>(cfg, "truth")));
        if (data.truth.params.n_nodes() != trial.n_nodes || data.truth.params.memory() != trial.memory) {
            throw ConfigError("config: truth shape differs from d1, tau");
        }
        data.panel = simulate(data.truth.params, trial.link, trial.horizon, derive_seed(seed, 2), trial.history);
    } else {
        data = make_trial(trial, seed);
    }
    std::ofstream panel(output_path(g, "panel.csv"));
    write_panel_csv(panel, data.panel);
    write_json(output_path(g, "truth.json"), truth_to_json(data.truth), true);
    write_json(output_path(g, "simulate_config.json"),
               {{"d1", trial.n_nodes},
                {"tau", trial.memory},
                {"T", trial.horizon},
                {"link", trial.link.name()},
                {"seed", seed},
                {"history", history_name(trial.history)},
                {"normalization", trial.generator.normalization == RowNormalization::WithBackground
                                      ? "with-background"
                                      : "adjacency-only"},
                {"sparsify_quantile", trial.generator.sparsify_quantile},
                {"truth_seed", data.truth.seed},
                {"panel_seed", derive_seed(seed, 2)}});
    std::cout << "wrote panel.csv, truth.json (d1=" << trial.n_nodes << ", tau=" << trial.memory
              << ", T=" << trial.horizon << ")\n";
    return kOk;
}

// ---------------------------------------------------------------- fit / sweep

struct FitArgs {
    std::string data;
    std::optional<std::string> truth;
    std::string penalty = "none";
    std::string link = "exponential";
    std::optional<double> lambda;
    bool full = false;
    bool strict = false;
    SolverFlags solver;
    GridFlags grid;
};

struct Loaded {
    TimeSeriesPanel panel;
    Design design;
    std::optional<GroundTruth> truth;
};

Loaded load(const FitArgs& a) {
    Loaded l;
    auto in = open_in(a.data);
    l.panel = read_panel_csv(in);
    l.design = Design::from_panel(l.panel);
    if (a.truth) {
        l.truth = truth_from_json(read_json(*a.truth));
        if (l.truth->params.n_nodes() != l.panel.n_nodes() || l.truth->params.memory() != l.panel.memory()) {
            throw ConfigError("truth shape does not match the panel");
        }
    }
    return l;
}

// Linear-link estimates are scores while fitting; --strict-feasibility asks
// that the final one be a probability model on the observed data.
void check_feasible(const FitArgs& a, const Link& link, const Design& design, const ParamMatrix& theta) {
    if (a.strict && link.kind() == LinkKind::Linear) {
        concatenated_field(theta, design, link, Execution::Serial, Feasibility::Enforce);
    }
}

Json fit_config_echo(const FitArgs& a, const Link& link, PenaltyKind kind) {
    return {{"data", a.data},
            {"penalty", penalty_name(kind)},
            {"link", link.name()},
            {"thres", a.grid.thres},
            {"floor", a.grid.floor},
            {"edge_eps", a.grid.edge_eps},
            {"grid", {{"lo", a.grid.lo}, {"hi", a.grid.hi}, {"n", a.grid.n}}},
            {"shd", a.grid.shd}};
}

void write_metrics_row(const Global& g, const std::string& name, double lambda, const RecoveryMetrics& m,
                       double field_norm) {
    std::ofstream out(output_path(g, name));
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "lambda,A_err,nu_err,h,shd,field_norm\n";
    out << lambda << ',' << m.a_err << ',' << m.nu_err << ',' << m.dagness << ',' << m.shd << ',' << field_norm
        << '\n';
}

int run_fit_or_sweep(const Global& g, const FitArgs& a, bool sweep_mode) {
    const Link link = Link::parse(a.link);
    const PenaltyKind kind = parse_penalty_kind(a.penalty);
    const SolverConfig solver = a.solver.build(g.seed, g.jobs);
    SweepOptions opt = a.grid.build();
    const Loaded l = load(a);
    if (l.truth) opt.truth = l.truth->params;

    FitResult result;
    double lambda = 0.0;
    std::optional<SweepResult> sweep;
    if (kind == PenaltyKind::None) {
        result = fit_decoupled(l.design, link, solver);
    } else if (a.lambda && !sweep_mode) {
        lambda = *a.lambda;
        const ParamMatrix pilot = pilot_estimate(l.design, link, solver);
        result = fit(l.design, link, make_penalty(kind, lambda, pilot, opt.floor, opt.edge_eps), solver);
    } else {
        opt.early_exit = !(sweep_mode && a.full);
        opt.execution = solver.execution;
        sweep = lambda_sweep(l.design, link, kind, solver, opt);
        lambda = sweep->selected_lambda;
        // refit at the selected lambda to report its own iteration count
        result = fit(l.design, link, make_penalty(kind, lambda, sweep->pilot, opt.floor, opt.edge_eps), solver);
        std::ofstream csv(output_path(g, "sweep.csv"));
        write_sweep_csv(csv, *sweep);
    }
    check_feasible(a, link, l.design, result.theta_hat);

    Json j = fit_to_json(result, solver);
    j["config"]["fit"] = fit_config_echo(a, link, kind);
    j["lambda"] = lambda;
    j["dagness"] = total_dagness(result.theta_hat);
    if (sweep) {
        j["qualified"] = sweep->qualified;
        j["selected_index"] = sweep->selected_index;
    }
    if (l.truth) {
        const auto m = evaluate(result.theta_hat, l.truth->params, opt.edge_eps, opt.shd_convention);
        j["metrics"] = metrics_json(m);
        write_metrics_row(g, "metrics.csv", lambda, m, result.final_field_norm);
    }
    write_json(output_path(g, "fit.json"), j, true);

    std::cout << penalty_name(kind) << ": lambda=" << lambda << " h=" << total_dagness(result.theta_hat)
              << " ||F||=" << result.final_field_norm;
    if (sweep && !sweep->qualified) std::cout << " (threshold not met on the grid)";
    std::cout << '\n';
    return kOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string name;
    std::optional<std::size_t> trials;
    std::vector<std::string> sizes;
    std::vector<std::string> links;
    std::vector<std::string> methods;
    std::vector<double> thresholds;
    std::optional<std::size_t> d1;
    std::optional<std::size_t> horizon;
    std::size_t tau = 1;
    SolverFlags solver;
    GridFlags grid;
};

std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("size '" + s + "' must look like d1:T");
    try {
        return {std::stoul(s.substr(0, colon)), std::stoul(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ConfigError("size '" + s + "' must look like d1:T");
    }
}

void write_plot_rows(std::ostream& out, const TrialConfig& c, const std::vector<MethodAggregate>& aggs) {
    for (const auto& a : aggs) {
        const std::pair<const char*, Summary> metrics[] = {
            {"A_err", a.a_err}, {"nu_err", a.nu_err}, {"h", a.dagness}, {"shd", a.shd}};
        for (const auto& [name, s] : metrics) {
            out << c.n_nodes << ',' << c.horizon << ',' << c.link.name() << ',' << penalty_name(a.kind) << ','
                << a.thres << ',' << name << ',' << s.mean << ',' << s.stddev << '\n';
        }
    }
}

int cmd_experiment(const Global& g, const ExperimentArgs& a) {
    if (a.name != "exp1" && a.name != "exp2" && a.name != "figure2") {
        throw ConfigError("unknown experiment '" + a.name + "' (exp1, exp2, figure2)");
    }
    const SolverConfig solver = a.solver.build(g.seed, 1);
    const SweepOptions grid = a.grid.build();

    if (a.name == "figure2") {
        TrialConfig c;
        c.n_nodes = a.d1.value_or(10);
        c.memory = a.tau;
        c.horizon = a.horizon.value_or(500);
        c.link = Link::parse(a.links.empty() ? "exponential" : a.links.front());
        c.solver = solver;
        const PenaltyKind kind = parse_penalty_kind(a.methods.empty() ? "adaptive-linear" : a.methods.front());
        const TrialData data = make_trial(c, g.seed);
        SweepOptions opt = grid;
        opt.thres = a.thresholds.empty() ? 1e-8 : a.thresholds.front();
        opt.truth = data.truth.params;
        opt.early_exit = false;
        opt.execution = g.jobs == 1 ? Execution::Serial : Execution::Parallel;
        const Design design = Design::from_panel(data.panel);
        const SweepResult r = lambda_sweep(design, c.link, kind, solver, opt);
        std::ofstream csv(output_path(g, "figure2.csv"));
        write_sweep_csv(csv, r);
        write_json(output_path(g, "figure2_truth.json"), truth_to_json(data.truth), true);
        write_json(output_path(g, "experiment_config.json"),
                   {{"name", a.name}, {"seed", g.seed}, {"d1", c.n_nodes}, {"tau", c.memory}, {"T", c.horizon},
                    {"link", c.link.name()}, {"method", penalty_name(kind)}, {"thres", opt.thres},
                    {"grid", {{"lo", a.grid.lo}, {"hi", a.grid.hi}, {"n", a.grid.n}}},
                    {"solver", solver_config_to_json(solver)}});
        std::cout << "figure2: selected lambda " << r.selected_lambda << (r.qualified ? "" : " (threshold not met)")
                  << '\n';
        return kOk;
    }

    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    if (a.d1 || a.horizon) sizes.push_back({a.d1.value_or(10), a.horizon.value_or(500)});
    for (const auto& s : a.sizes) sizes.push_back(parse_size(s));
    if (sizes.empty()) sizes = {{10, 500}, {20, 1000}, {30, 1500}};
    const std::vector<std::string> links =
        a.links.empty() ? std::vector<std::string>{"linear", "exponential"} : a.links;
    const std::size_t trials = a.trials.value_or(200);
    const bool exp1 = a.name == "exp1";
    const std::vector<PenaltyKind> methods = parse_methods(
        !a.methods.empty() ? a.methods
        : exp1             ? std::vector<std::string>{"none", "adaptive-linear", "dag", "l1", "adaptive-l1"}
                           : std::vector<std::string>{"adaptive-linear"});
    const std::vector<double> thresholds =
        a.thresholds.empty() ? std::vector<double>{1e-1, 1e-2, 1e-4, 1e-6, 1e-8} : a.thresholds;

    std::ofstream agg(output_path(g, a.name + "_aggregate.csv"));
    std::ofstream rows(output_path(g, a.name + "_trials.csv"));
    std::ofstream plot(output_path(g, a.name + "_plot.csv"));
    for (auto* f : {&agg, &rows, &plot}) f->precision(std::numeric_limits<double>::max_digits10);
    agg << aggregate_csv_header() << '\n';
    rows << trial_csv_header() << '\n';
    plot << "d1,T,link,method,thres,metric,mean,std\n";

    Json settings = Json::array();
    std::size_t failures = 0;
    for (const auto& [d1, T] : sizes) {
        for (const auto& link_name : links) {
            TrialConfig c;
            c.n_nodes = d1;
            c.memory = a.tau;
            c.horizon = T;
            c.link = Link::parse(link_name);
            c.solver = solver;
            c.sweep = grid;
            if (exp1 && !a.thresholds.empty()) c.sweep.thres = a.thresholds.front();
            if (d1 < 2) throw ConfigError("experiment: d1 must be >= 2");
            for (PenaltyKind m : methods)
                if (m == PenaltyKind::Dag && a.tau != 1) throw ConfigError("dag penalty needs --tau 1");

            const std::string setting = "d" + std::to_string(d1) + "_T" + std::to_string(T) + "_" + link_name;
            std::cerr << a.name << ": " << setting << ", " << trials << " trials\n";
            std::vector<TrialOutcome> out;
            if (exp1) {
                out = run_trials(c, methods, trials, g.seed, g.jobs);
            } else {
                for (PenaltyKind m : methods) {
                    auto part = run_threshold_trials(c, m, thresholds, trials, g.seed, g.jobs);
                    if (out.empty()) out = std::move(part);
                    else
                        for (std::size_t t = 0; t < out.size(); ++t)
                            out[t].methods.insert(out[t].methods.end(), part[t].methods.begin(),
                                                  part[t].methods.end());
                }
            }
            const auto aggs = aggregate(out);
            write_trial_rows(rows, setting, c, out);
            write_aggregate_rows(agg, setting, c, aggs);
            write_plot_rows(plot, c, aggs);
            for (const auto& x : aggs) failures += x.failed;
            settings.push_back({{"setting", setting}, {"d1", d1}, {"T", T}, {"link", link_name}});
        }
    }
    Json methods_json = Json::array();
    for (PenaltyKind m : methods) methods_json.push_back(penalty_name(m));
    write_json(output_path(g, a.name + "_config.json"),
               {{"name", a.name}, {"seed", g.seed}, {"trials", trials}, {"tau", a.tau}, {"settings", settings},
                {"methods", methods_json},
                {"thres", exp1 ? Json(a.thresholds.empty() ? a.grid.thres : a.thresholds.front()) : Json(thresholds)},
                {"grid", {{"lo", a.grid.lo}, {"hi", a.grid.hi}, {"n", a.grid.n}}},
                {"floor", a.grid.floor}, {"edge_eps", a.grid.edge_eps}, {"shd", a.grid.shd},
                {"solver", solver_config_to_json(solver)}});
    if (failures) std::cerr << failures << " failed method runs; see the failure column of the trials file\n";
    return kOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
    std::string fit;
    std::string truth;
    std::optional<std::string> data;
    std::string link = "exponential";
    double edge_eps = kDefaultEdgeEps;
    double bound_eps = 0.05;
    std::string shd = "entrywise";
};

int cmd_metrics(const Global& g, const MetricsArgs& a) {
    const ParamMatrix estimate = theta_from_fit_json(read_json(a.fit));
    const GroundTruth truth = truth_from_json(read_json(a.truth));
    if (estimate.n_nodes() != truth.params.n_nodes() || estimate.memory() != truth.params.memory()) {
        throw ConfigError("estimate and truth shapes differ");
    }
    const auto m = evaluate(estimate, truth.params, a.edge_eps, GridFlags::parse_shd(a.shd));
    Json j = metrics_json(m);
    if (a.data) {
        auto in = open_in(*a.data);
        const Design design = Design::from_panel(read_panel_csv(in));
        Json reports = Json::array();
        for (const auto& r : bound_reports(design, Link::parse(a.link), truth.params, estimate, a.bound_eps))
            reports.push_back(bound_report_to_json(r));
        write_json(output_path(g, "bound_report.json"), reports);
        j["bound_report"] = "bound_report.json";
    }
    write_json(output_path(g, "metrics.json"), j);
    std::cout << "A_err=" << m.a_err << " nu_err=" << m.nu_err << " h=" << m.dagness << " shd=" << m.shd << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal DAG recovery for multivariate binary event series"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "base seed; trial t uses seed xor t")->capture_default_str();
    app.add_option("--jobs", g.jobs, "worker threads (0 = all available)")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "directory for output files")->capture_default_str();

    SimulateArgs sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "draw a ground truth and simulate a panel");
    simulate_cmd->add_option("config", sim.config, "JSON config with d1, tau, T, link, seed")->required();

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "fit one estimator to a panel");
    FitArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "fit over the lambda grid and report every point");
    for (auto [cmd, args] : {std::pair{fit_cmd, &fit_args}, std::pair{sweep_cmd, &sweep_args}}) {
        cmd->add_option("--data", args->data, "panel CSV")->required();
        cmd->add_option("--truth", args->truth, "ground-truth JSON for metrics");
        cmd->add_option("--penalty", args->penalty, "none | adaptive-linear | dag | l1 | adaptive-l1")
            ->capture_default_str();
        cmd->add_option("--link", args->link, "linear | exponential | sigmoid")->capture_default_str();
        cmd->add_flag("--strict-feasibility", args->strict,
                      "linear link: fail with exit 4 if the estimate leaves [0, 1] on the data");
        args->solver.add(cmd);
        args->grid.add(cmd);
    }
    fit_cmd->add_option("--lambda", fit_args.lambda, "fixed penalty strength (skips the sweep)");
    sweep_cmd->add_flag("--full", sweep_args.full, "evaluate every grid point instead of stopping at the selection");

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Monte-Carlo experiments: exp1, exp2, figure2");
    exp_cmd->add_option("name", exp.name, "exp1 | exp2 | figure2")->required();
    exp_cmd->add_option("--trials", exp.trials, "trials per setting (default 200)");
    exp_cmd->add_option("--sizes", exp.sizes, "d1:T pairs (default 10:500 20:1000 30:1500)");
    exp_cmd->add_option("--d1", exp.d1, "single size: number of nodes");
    exp_cmd->add_option("--T", exp.horizon, "single size: horizon");
    exp_cmd->add_option("--tau", exp.tau, "memory depth")->capture_default_str();
    exp_cmd->add_option("--links", exp.links, "links to run (default linear exponential)");
    exp_cmd->add_option("--methods", exp.methods, "penalties to run");
    exp_cmd->add_option("--thresholds", exp.thresholds, "exp2 thresholds; exp1 and figure2 use the first");
    exp.solver.add(exp_cmd);
    exp.grid.add(exp_cmd);

    MetricsArgs met;
    auto* metrics_cmd = app.add_subcommand("metrics", "score a fit against a ground truth");
    metrics_cmd->add_option("--fit", met.fit, "fit JSON")->required();
    metrics_cmd->add_option("--truth", met.truth, "ground-truth JSON")->required();
    metrics_cmd->add_option("--data", met.data, "panel CSV; adds per-node bound reports");
    metrics_cmd->add_option("--link", met.link, "link for the bound reports")->capture_default_str();
    metrics_cmd->add_option("--edge-eps", met.edge_eps, "binarization threshold")->capture_default_str();
    metrics_cmd->add_option("--bound-eps", met.bound_eps, "confidence level eps of the bounds")
        ->capture_default_str();
    metrics_cmd->add_option("--shd", met.shd, "entrywise | reversal-as-one")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }
    g.seed_given = app.get_option("--seed")->count() > 0;
#ifdef _OPENMP
    if (g.jobs > 0) omp_set_num_threads(static_cast<int>(g.jobs));
#endif

    try {
        if (*simulate_cmd) return cmd_simulate(g, sim);
        if (*fit_cmd) return run_fit_or_sweep(g, fit_args, false);
        if (*sweep_cmd) return run_fit_or_sweep(g, sweep_args, true);
        if (*exp_cmd) return cmd_experiment(g, exp);
        if (*metrics_cmd) return cmd_metrics(g, met);
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDivergence;
    } catch (const FeasibilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kOk;
}
