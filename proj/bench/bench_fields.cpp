// Times the vector-field kernels and the sweep against their serial references.
//
//   bench_fields [d1 T reps threads]
//
// Every parallel result is checked against the serial one before timing is reported.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cvdag/experiment.hpp"

using namespace cvdag;
using bench_clock = std::chrono::steady_clock;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = bench_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(bench_clock::now() - t0).count());
    }
    return best;
}

void row(const std::string& name, double seconds, double baseline) {
    std::cout << std::left << std::setw(34) << name << std::right << std::setw(12) << std::scientific
              << std::setprecision(3) << seconds << std::fixed << std::setw(10) << std::setprecision(2)
              << baseline / seconds << "x\n";
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t d1 = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20;
    const std::size_t T = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
    const int reps = argc > 3 ? std::atoi(argv[3]) : 20;
#ifdef _OPENMP
    if (argc > 4) omp_set_num_threads(std::atoi(argv[4]));
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif

    TrialConfig cfg;
    cfg.n_nodes = d1;
    cfg.horizon = T;
    cfg.link = Link(LinkKind::Exponential);
    const TrialData data = make_trial(cfg, 1);
    const Design design = Design::from_panel(data.panel);
    const Link g = cfg.link;
    const ParamMatrix& theta = data.truth.params;

    const Matrix ref = concatenated_field_reference(theta, data.panel, g);
    const Matrix serial = concatenated_field(theta, design, g, Execution::Serial);
    const Matrix parallel = concatenated_field(theta, design, g, Execution::Parallel);
    const double gap = std::max((serial - ref).cwiseAbs().maxCoeff(), (parallel - ref).cwiseAbs().maxCoeff());
    if (gap > 1e-10) {
        std::cerr << "kernel mismatch: " << gap << '\n';
        return 1;
    }

    std::cout << "d1=" << d1 << " T=" << T << " threads=" << threads << " (best of " << reps << ")\n";
    std::cout << std::left << std::setw(34) << "kernel" << std::right << std::setw(12) << "seconds" << std::setw(11)
              << "speedup\n";

    const double t_ref = best_of(std::max(1, reps / 10), [&] { (void)concatenated_field_reference(theta, data.panel, g); });
    const double t_serial = best_of(reps, [&] { (void)concatenated_field(theta, design, g, Execution::Serial); });
    const double t_par = best_of(reps, [&] { (void)concatenated_field(theta, design, g, Execution::Parallel); });
    row("field: per-step reference", t_ref, t_ref);
    row("field: dense serial", t_serial, t_ref);
    row("field: OpenMP per column", t_par, t_ref);

    SolverConfig solver;
    solver.total_iters = 500;
    const double t_fit_s = best_of(3, [&] { (void)fit_decoupled(design, g, solver); });
    solver.execution = Execution::Parallel;
    const double t_fit_p = best_of(3, [&] { (void)fit_decoupled(design, g, solver); });
    row("fit (500 iters): serial columns", t_fit_s, t_fit_s);
    row("fit (500 iters): OpenMP columns", t_fit_p, t_fit_s);

    SweepOptions opt;
    opt.grid = log_grid(1e-4, 1.0, 8);
    opt.early_exit = false;
    opt.pilot = theta;
    solver.execution = Execution::Serial;
    const double t_sweep_s =
        best_of(1, [&] { (void)lambda_sweep(design, g, PenaltyKind::AdaptiveLinear, solver, opt); });
    opt.execution = Execution::Parallel;
    const double t_sweep_p =
        best_of(1, [&] { (void)lambda_sweep(design, g, PenaltyKind::AdaptiveLinear, solver, opt); });
    row("sweep (8 lambdas): serial", t_sweep_s, t_sweep_s);
    row("sweep (8 lambdas): OpenMP grid", t_sweep_p, t_sweep_s);
    return 0;
}
