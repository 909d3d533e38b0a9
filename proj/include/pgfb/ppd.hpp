/*=============================================================================
 * Preconditioned primal-dual baseline on the split F = f + g o K, where K
 * stacks one row per active edge, lam_d1 (x_u - x_v), and one row per active
 * vertex, lam_l1 x_v, and g is the plain sum of absolute values. Diagonal
 * step sizes follow the row/column-sum rule with exponent alpha (tau from
 * columns, sigma from rows); the dual prox is the projection onto the unit
 * box, the primal prox of the quadratic part is coordinatewise closed form,
 * extrapolation factor 1.
 *===========================================================================*/
#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "pgfb/graph_problem.hpp"
#include "pgfb/solver.hpp"

namespace pgfb {

struct SplitOperatorK {
    /* rows: active edges first (coefficient +lam at u, -lam at v), then
     * active vertices (lam at v); coefficients match the problem */
    std::size_t num_rows = 0;
    std::size_t num_edge_rows = 0;
    std::vector<Edge> row_edges;        // per edge row
    std::vector<double> row_coef;       // per row: lam_d1 resp. lam_l1
    std::vector<vertex_t> row_vertices; // per vertex row
    /* vertex -> touching rows, ascending row index; sign on bit 0 */
    std::vector<std::uint32_t> col_start;
    std::vector<std::uint32_t> cols; // (row << 1) | (coef negated ? 1 : 0)

    void apply(std::span<const double> x, std::span<double> out,
        int threads = 1) const;
    void apply_transpose(std::span<const double> d, std::span<double> out,
        int threads = 1) const;
};

SplitOperatorK build_k(const GraphProblem& p);

struct PpdStepSizes {
    std::vector<double> tau;   // per vertex
    std::vector<double> sigma; // per row
};

/* tau_j = 1 / sum_i |K_ij|^(2-alpha), sigma_i = 1 / sum_j |K_ij|^alpha;
 * a vertex touched by no row falls back to tau_j = 1/lam_l2_j */
PpdStepSizes ppd_precond(const GraphProblem& p, const SplitOperatorK& k,
    double alpha = 1.0);

class PpdSolver {
public:
    PpdSolver(const GraphProblem& p, const SolverConfig& cfg);
    void step();
    SolveResult run();
    double fixed_point_residual() const;
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& dual() const { return d_; }

private:
    const GraphProblem& p_;
    SolverConfig cfg_;
    SplitOperatorK k_;
    PpdStepSizes steps_;
    std::vector<double> x_, x_prev_, xbar_, d_;
    std::uint64_t iter_ = 0;
};

SolveResult ppd_run(const GraphProblem& p, const SolverConfig& cfg);

} // namespace pgfb
