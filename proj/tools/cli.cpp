#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pgfb/graph_problem.hpp"
#include "pgfb/io.hpp"
#include "pgfb/ppd.hpp"
#include "pgfb/solver.hpp"
#include "pgfb/synth.hpp"

namespace pgfb_cli {

namespace {

using namespace pgfb;

constexpr int exit_ok = 0, exit_usage = 1, exit_data = 2, exit_numerical = 3;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct SolveOptions {
    std::string vertices, edges, algo = "pgfb";
    std::string trace, solution;
    SolverConfig cfg;
    double zero_tol = -1.0; // < 0: default rule
};

Algo parse_algo(const std::string& name)
{
    if (name == "pgfb"){ return Algo::pgfb; }
    if (name == "gfb-scalar"){ return Algo::gfb_scalar; }
    if (name == "ppd"){ return Algo::ppd; }
    throw ConfigError("unknown algorithm '" + name + "'");
}

int run_solve(const SolveOptions& opt)
{
    const GraphProblem p = load_problem(opt.vertices, opt.edges);
    SolverConfig cfg = opt.cfg;
    cfg.algo = parse_algo(opt.algo);
    const SolveResult res = run(p, cfg);

    std::cout << "algo=" << opt.algo << "\n";
    std::cout << "iterations=" << res.trace.records.size() << "\n";
    const double obj = objective_value(p, res.x, cfg.threads);
    std::cout << "objective=" << fmt(obj) << "\n";
    double seconds = 0.0;
    int reconds = 0;
    if (!res.trace.records.empty()){
        seconds = res.trace.records.back().seconds;
        std::cout << "rel_change="
            << fmt(res.trace.records.back().rel_change) << "\n";
        for (const TraceRecord& r : res.trace.records){
            reconds += r.recond ? 1 : 0;
        }
    }
    std::cout << "seconds=" << fmt(seconds) << "\n";
    std::cout << "reconditionings=" << reconds << "\n";
    if (p.has_mu()){
        const double tol = opt.zero_tol >= 0.0 ? opt.zero_tol
            : default_zero_tol(p);
        std::cout << "compression_ratio="
            << fmt(compression_ratio(p, res.x, tol)) << "\n";
    }
    if (p.has_nu()){
        std::cout << "relative_error=" << fmt(relative_error(p, res.x))
            << "\n";
    }
    if (!opt.solution.empty()){ write_solution(opt.solution, res.x); }
    if (!opt.trace.empty()){ write_trace_csv(opt.trace, res.trace); }
    return exit_ok;
}

struct SynthOptions {
    std::string grid = "32x32";
    std::string vertices = "vertices.txt", edges = "edges.txt";
    SynthConfig cfg;
};

int run_synth(const SynthOptions& opt)
{
    SynthConfig cfg = opt.cfg;
    const std::size_t x = opt.grid.find('x');
    try{
        if (x == std::string::npos){ throw std::invalid_argument(""); }
        cfg.width = (std::uint32_t) std::stoul(opt.grid.substr(0, x));
        cfg.height = (std::uint32_t) std::stoul(opt.grid.substr(x + 1));
    }catch (const std::exception&){
        std::cerr << "error: --grid expects WxH, got '" << opt.grid
            << "'\n";
        return exit_usage;
    }
    const GraphProblem p = synth_grid(cfg);
    write_problem(opt.vertices, opt.edges, p);
    std::cout << "vertices=" << p.num_vertices << "\n";
    std::cout << "edges=" << p.edges.size() << "\n";
    return exit_ok;
}

struct CompareOptions {
    std::string vertices, edges, out = "compare.csv";
    std::vector<std::string> algos;
    std::uint64_t max_iter = 1000, ref_iter = 0;
    SolverConfig base;
};

/* tokens: pgfb (theta = 1e-3), pgfb:<theta>, gfb-scalar, ppd */
SolverConfig token_config(const std::string& token, const SolverConfig& base)
{
    SolverConfig cfg = base;
    cfg.tol = 0.0; // run the full horizon so gap curves are comparable
    if (token == "pgfb"){
        cfg.algo = Algo::pgfb;
        cfg.recond_threshold = 1e-3;
    }else if (token.rfind("pgfb:", 0) == 0){
        cfg.algo = Algo::pgfb;
        try{
            cfg.recond_threshold = std::stod(token.substr(5));
        }catch (const std::exception&){
            throw ConfigError("bad algorithm token '" + token + "'");
        }
        if (cfg.recond_threshold < 0.0){
            throw ConfigError("negative threshold in '" + token + "'");
        }
    }else{
        cfg.algo = parse_algo(token);
        cfg.recond_threshold = 0.0;
    }
    return cfg;
}

int run_compare(const CompareOptions& opt)
{
    const GraphProblem p = load_problem(opt.vertices, opt.edges);
    std::vector<std::string> tokens = opt.algos;
    if (tokens.empty()){ tokens = {"pgfb:1e-3", "pgfb:0", "ppd"}; }

    std::vector<SolveResult> results;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < tokens.size(); i++){
        SolverConfig cfg = token_config(tokens[i], opt.base);
        cfg.max_iter = opt.max_iter;
        results.push_back(run(p, cfg));
        const double fin = results.back().trace.records.empty()
            ? objective_value(p, results.back().x)
            : results.back().trace.records.back().objective;
        if (fin < best){ best = fin; best_i = i; }
    }

    /* reference minimum: extend the best run well past the horizon */
    SolverConfig ref_cfg = token_config(tokens[best_i], opt.base);
    ref_cfg.max_iter = opt.ref_iter ? opt.ref_iter
        : std::max<std::uint64_t>(5000, 5*opt.max_iter);
    const SolveResult ref = run(p, ref_cfg);
    double fstar = best;
    for (const TraceRecord& r : ref.trace.records){
        fstar = std::min(fstar, r.objective);
    }
    for (const SolveResult& res : results){
        for (const TraceRecord& r : res.trace.records){
            fstar = std::min(fstar, r.objective);
        }
    }

    std::ofstream out(opt.out);
    if (!out){
        std::cerr << "error: cannot write " << opt.out << "\n";
        return exit_data;
    }
    out << "algo,iter,seconds,gap\n";
    for (std::size_t i = 0; i < tokens.size(); i++){
        for (const TraceRecord& r : results[i].trace.records){
            out << tokens[i] << ',' << r.iter << ',' << fmt(r.seconds)
                << ',' << fmt(r.objective - fstar) << '\n';
        }
    }
    std::cout << "reference_objective=" << fmt(fstar) << "\n";
    std::cout << "out=" << opt.out << "\n";
    return exit_ok;
}

CLI::Validator open_interval(double lo, double hi)
{
    return CLI::Validator([lo, hi](std::string& s){
        double v = 0.0;
        try{ v = std::stod(s); }catch (const std::exception&){
            return std::string("not a real number");
        }
        if (!(v > lo) || !(v < hi)){
            return "must lie strictly between " + std::to_string(lo)
                + " and " + std::to_string(hi);
        }
        return std::string();
    }, "OPEN_INTERVAL");
}

void add_solver_flags(CLI::App* cmd, SolverConfig& cfg)
{
    cmd->add_option("--rho", cfg.rho, "relaxation parameter")
        ->check(open_interval(0.0, 2.0));
    cmd->add_option("--delta", cfg.delta, "step metric cap factor")
        ->check(open_interval(0.0, 1.0));
    cmd->add_option("--tol", cfg.tol,
        "stop on relative iterate change")->check(CLI::NonNegativeNumber);
    cmd->add_option("--recond-threshold", cfg.recond_threshold,
        "initial reconditioning threshold, 0 disables (pgfb only)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--recond-divisor", cfg.recond_divisor,
        "threshold divisor after each reconditioning (pgfb only)");
    cmd->add_option("--recond-max", cfg.max_reconditionings,
        "maximum number of reconditionings (pgfb only)");
    cmd->add_option("--lipschitz-fallback", cfg.lipschitz_fallback,
        "Lipschitz coefficient on zero-fidelity coordinates (0: automatic)");
    cmd->add_option("--threads", cfg.threads,
        "thread count (0: PGFB_NUM_THREADS or 1)");
    std::map<std::string, GammaMode> gmodes{
        {"whole-functional", GammaMode::whole_functional},
        {"smooth-only", GammaMode::smooth_only}};
    cmd->add_option("--gamma-mode", cfg.gamma_mode, "step metric source")
        ->transform(CLI::CheckedTransformer(gmodes));
    std::map<std::string, WeightMode> wmodes{
        {"coordinate-scaled", WeightMode::coordinate_scaled},
        {"shape-preserving", WeightMode::shape_preserving}};
    cmd->add_option("--weight-mode", cfg.weight_mode,
        "weight normalization")->transform(CLI::CheckedTransformer(wmodes));
}

} // namespace

int cli_main(int argc, const char* const* argv)
{
    CLI::App app{"graph fused-lasso solvers: preconditioned generalized "
        "forward-backward with reconditioning, scalar-metric splitting, and "
        "a preconditioned primal-dual baseline"};
    app.require_subcommand(1);

    SolveOptions sopt;
    CLI::App* solve = app.add_subcommand("solve",
        "run one algorithm on an instance");
    solve->add_option("--vertices", sopt.vertices, "vertex table")
        ->required();
    solve->add_option("--edges", sopt.edges, "edge table")->required();
    solve->add_option("--algo", sopt.algo, "pgfb | gfb-scalar | ppd")
        ->check(CLI::IsMember({"pgfb", "gfb-scalar", "ppd"}));
    solve->add_option("--max-iter", sopt.cfg.max_iter, "iteration cap");
    solve->add_option("--trace", sopt.trace, "write per-iteration CSV");
    solve->add_option("--solution", sopt.solution, "write solution vector");
    solve->add_option("--zero-tol", sopt.zero_tol,
        "zero tolerance of the compression ratio (<0: automatic)");
    add_solver_flags(solve, sopt.cfg);

    SynthOptions yopt;
    CLI::App* synth = app.add_subcommand("synth",
        "generate a synthetic grid instance");
    synth->add_option("--grid", yopt.grid, "WxH")->required();
    synth->add_option("--seed", yopt.cfg.seed, "random seed");
    synth->add_option("--noise", yopt.cfg.noise, "observation noise level");
    synth->add_option("--pieces", yopt.cfg.pieces,
        "constant cells in the ground truth");
    synth->add_option("--zero-frac", yopt.cfg.zero_frac,
        "fraction of zero-fidelity vertices")->check(CLI::Range(0.0, 1.0));
    synth->add_option("--tv", yopt.cfg.tv_strength, "mean tv weight");
    synth->add_option("--l1", yopt.cfg.l1_strength,
        "l1 weight on zero-fidelity vertices");
    synth->add_option("--hetero", yopt.cfg.hetero,
        "multiplicative heterogeneity of weights");
    synth->add_option("--vertices", yopt.vertices, "output vertex table");
    synth->add_option("--edges", yopt.edges, "output edge table");

    CompareOptions copt;
    CLI::App* compare = app.add_subcommand("compare",
        "run several configurations, emit objective-gap CSV");
    compare->add_option("--vertices", copt.vertices, "vertex table")
        ->required();
    compare->add_option("--edges", copt.edges, "edge table")->required();
    compare->add_option("--algo", copt.algos,
        "configuration token: pgfb[:theta] | gfb-scalar | ppd (repeatable)");
    compare->add_option("--max-iter", copt.max_iter, "horizon per run");
    compare->add_option("--ref-iter", copt.ref_iter,
        "reference-run horizon (0: max(5000, 5 max-iter))");
    compare->add_option("--out", copt.out, "output CSV");
    add_solver_flags(compare, copt.base);

    try{
        app.parse(argc, argv);
    }catch (const CLI::ParseError& e){
        if (e.get_exit_code() == 0){ return app.exit(e); } // --help
        app.exit(e);
        return exit_usage;
    }

    try{
        if (*solve){ return run_solve(sopt); }
        if (*synth){ return run_synth(yopt); }
        if (*compare){ return run_compare(copt); }
    }catch (const ParseError& e){
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }catch (const ValidationError& e){
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }catch (const ConfigError& e){
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }catch (const NumericalError& e){
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }catch (const std::exception& e){
        std::cerr << "error: " << e.what() << "\n";
        return exit_data;
    }
    return exit_usage;
}

} // namespace pgfb_cli
