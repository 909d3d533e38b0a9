/*=============================================================================
 * Preconditioned generalized forward-backward splitting over the tight
 * edge/vertex splitting of the graph objective.
 *
 * Main iteration, with B the gradient of the quadratic part:
 *
 *   p <- 2x - Gamma Bx
 *   for each functional i:  z_i <- z_i + rho (J_i(p^Hi - z_i) - x^Hi)
 *   x <- sum_i W_i z_i  (+ residual term)
 *
 * where J_i is the prox of the i-th term in the metric Gamma^-1 W_i. Each
 * active edge owns a two-coordinate auxiliary variable, each active vertex a
 * scalar one; auxiliary storage is exactly 2|E+| + |V+| (+ residual support),
 * never a full vector per functional.
 *
 * Reconditioning: when the relative iterate evolution first drops below the
 * current threshold, the quadratic approximations are rebuilt at the current
 * iterate, Gamma and the weights are rebuilt, the auxiliary variables are
 * remapped, and the threshold is divided by a fixed factor. A transient jump
 * of the objective right after a reconditioning is expected and recovers
 * within a few iterations.
 *
 * Inner loops are OpenMP-parallel with disjoint writes; the aggregation of x
 * sums each coordinate's covering functionals in a fixed ascending order, so
 * traces are bit-identical whatever the thread count. A plain serial
 * transcription of the same kernels lives in reference.hpp for testing.
 *===========================================================================*/
#pragma once
#include <cstdint>
#include <vector>

#include "pgfb/graph_problem.hpp"
#include "pgfb/preconditioner.hpp"

namespace pgfb {

enum class Algo { pgfb, gfb_scalar, ppd };

struct SolverConfig {
    double rho = 1.5;   // relaxation, in (0, 2 - max_j gamma_j l_j / 2)
    double delta = 0.99; // cap factor of the step metric, in (0, 1)
    GammaMode gamma_mode = GammaMode::whole_functional;
    WeightMode weight_mode = WeightMode::coordinate_scaled;
    std::uint64_t max_iter = 1000;
    double tol = 1e-6;  // stop when ||x_k - x_{k-1}|| / ||x_{k-1}|| <= tol
    double recond_threshold = 0.0; // initial theta; 0 disables reconditioning
    double recond_divisor = 10.0;  // theta divisor after each reconditioning
    int max_reconditionings = 8;
    double lipschitz_fallback = 0.0; // <= 0: mean positive fidelity weight
    Algo algo = Algo::pgfb;
    int threads = 1;
};

struct TraceRecord {
    std::uint64_t iter;
    double objective;
    double rel_change;
    double seconds; // wall clock since the iteration loop started
    bool recond;    // preconditioner rebuilt right after this iteration
};

struct ConvergenceTrace {
    std::vector<TraceRecord> records;
};

struct SolveResult {
    std::vector<double> x;
    ConvergenceTrace trace;
};

class PgfbSolver {
public:
    /* cold-start preconditioner; default warm start at the observation:
     * z_uv = (y_u, y_v), z_v = y_v, so that x_0 = y */
    PgfbSolver(const GraphProblem& p, const SolverConfig& cfg);
    PgfbSolver(const GraphProblem& p, const SolverConfig& cfg,
        AuxiliaryVariables z0);

    /* one full iteration */
    void step();

    /* iterate until the relative evolution reaches tol or max_iter, applying
     * the reconditioning schedule; records one trace entry per iteration */
    SolveResult run();

    /* ||x_k - x_{k-1}|| / max(||x_{k-1}||, tiny), k >= 1 */
    double fixed_point_residual() const;

    std::uint64_t iterations() const { return iter_; }
    const std::vector<double>& x() const { return x_; }
    const AuxiliaryVariables& aux() const { return z_; }
    const Preconditioner& precond() const { return pc_; }
    int reconditionings() const { return recond_count_; }

private:
    void build_structures();
    void set_preconditioner(Preconditioner pc);
    void check_relaxation_bound() const;
    void recondition_now();

    const GraphProblem& p_;
    SolverConfig cfg_;
    DiagonalMetric L_;
    Preconditioner pc_;
    AuxiliaryVariables z_;
    bool store_residual_ = false;
    std::vector<vertex_t> res_support_;
    std::vector<std::uint32_t> res_pos_;   // vertex -> residual index or npos
    std::vector<std::uint32_t> v_plus_pos_; // vertex -> v_plus index or npos
    /* vertex -> incident active edges, ascending edge index; entry packs the
     * active-edge index (bits 1..) and the endpoint side (bit 0) */
    std::vector<std::uint32_t> adj_start_;
    std::vector<std::uint32_t> adj_;
    std::vector<double> x_, x_prev_, bx_, p_vec_;
    std::uint64_t iter_ = 0;
    double theta_;
    int recond_count_ = 0;
};

/* scalar-metric mode recovering the original splitting: Gamma = gamma Id with
 * gamma = delta (4 - 2 rho) / max_j l_j, equal weights 1/n over full-space
 * auxiliary copies; meant for small instances and equivalence checks */
class GfbScalarSolver {
public:
    GfbScalarSolver(const GraphProblem& p, const SolverConfig& cfg);
    void step();
    SolveResult run();
    double fixed_point_residual() const;
    const std::vector<double>& x() const { return x_; }
    double gamma() const { return gamma_; }

private:
    const GraphProblem& p_;
    SolverConfig cfg_;
    double gamma_, weight_;
    std::vector<std::vector<double>> z_; // one full copy per functional
    std::vector<double> x_, x_prev_, bx_;
    std::uint64_t iter_ = 0;
};

/* dispatch on cfg.algo */
SolveResult run(const GraphProblem& p, const SolverConfig& cfg);

} // namespace pgfb
