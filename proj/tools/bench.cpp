/*=============================================================================
 * Benchmark of the OpenMP kernels against the serial reference: identical
 * iterates are asserted bitwise, then per-iteration wall times are compared
 * on a synthetic grid.
 *===========================================================================*/
#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <vector>

#include "pgfb/parallel.hpp"
#include "pgfb/reference.hpp"
#include "pgfb/solver.hpp"
#include "pgfb/synth.hpp"

using namespace pgfb;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now()
        - t0).count();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"compare the OpenMP solver kernels against the serial "
        "reference implementation"};
    std::uint32_t side = 128;
    std::uint64_t iters = 200, seed = 7;
    int threads = 0;
    app.add_option("--side", side, "grid side length");
    app.add_option("--iters", iters, "iterations per run");
    app.add_option("--seed", seed, "instance seed");
    app.add_option("--threads", threads, "thread count for the OpenMP run");
    CLI11_PARSE(app, argc, argv);
    threads = resolve_threads(threads);

    SynthConfig scfg;
    scfg.width = scfg.height = side;
    scfg.seed = seed;
    scfg.zero_frac = 0.1;
    scfg.hetero = 1.5;
    const GraphProblem p = synth_grid(scfg);
    std::printf("instance: %ux%u grid, |V| = %u, |E| = %zu, "
        "|E+| = %zu, |V+| = %zu\n", side, side, p.num_vertices,
        p.edges.size(), p.active.e_plus.size(), p.active.v_plus.size());

    SolverConfig cfg;
    cfg.max_iter = iters;
    cfg.threads = threads;

    PgfbSolver par(p, cfg);
    auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < iters; k++){ par.step(); }
    const double t_par = seconds_since(t0);

    reference::Solver ref(p, cfg);
    t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < iters; k++){ ref.step(); }
    const double t_ref = seconds_since(t0);

    std::size_t mismatch = 0;
    for (std::size_t v = 0; v < p.num_vertices; v++){
        if (par.x()[v] != ref.x()[v]){ mismatch++; }
    }

    const bool same_objective = objective_value(p, par.x(), threads)
        == reference::objective(p, ref.x());

    const std::size_t evals = 64;
    t0 = std::chrono::steady_clock::now();
    double keep = 0.0; // defeat dead-code elimination
    for (std::size_t i = 0; i < evals; i++){
        keep += objective_value(p, par.x(), threads);
    }
    const double t_obj_par = seconds_since(t0)/ (double) evals;
    t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < evals; i++){
        keep += reference::objective(p, ref.x());
    }
    const double t_obj_ref = seconds_since(t0)/ (double) evals;

    std::printf("iterates bitwise identical: %s\n",
        mismatch == 0 ? "yes" : "NO");
    std::printf("objective bitwise identical: %s\n",
        same_objective ? "yes" : "NO");
    std::printf("%-28s %10.3f ms/iter\n", "serial reference step",
        1e3*t_ref/(double) iters);
    std::printf("%-28s %10.3f ms/iter  (%d threads, speedup %.2fx)\n",
        "openmp step", 1e3*t_par/(double) iters, threads, t_ref/t_par);
    std::printf("%-28s %10.3f ms\n", "serial reference objective",
        1e3*t_obj_ref);
    std::printf("%-28s %10.3f ms  (speedup %.2fx)\n", "openmp objective",
        1e3*t_obj_par, t_obj_ref/t_obj_par);

    return (mismatch == 0 && same_objective && keep == keep) ? 0 : 1;
}
