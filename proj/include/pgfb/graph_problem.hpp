/*=============================================================================
 * Problem data for graph-structured fused-lasso instances:
 *
 *   F(x) = 1/2 sum_v lam_l2_v (x_v - y_v)^2
 *        + sum_{(u,v) in E} lam_d1_uv |x_u - x_v|
 *        + sum_v lam_l1_v |x_v|
 *
 * over a finite undirected graph, with observed values y, per-vertex fidelity
 * and l1 weights, per-edge total-variation weights, and optional border
 * lengths mu / extensive quantities nu used only by the evaluation metrics.
 *
 * A missing observation is encoded as y_v = 0 with lam_l2_v = 0.
 *===========================================================================*/
#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "pgfb/errors.hpp"

namespace pgfb {

using vertex_t = std::uint32_t;

struct Edge {
    vertex_t u, v; // stored normalized, u < v
};

/* indices of the strictly positive coefficients, ascending:
 * e_plus = { e | lam_d1[e] > 0 },  v_plus = { v | lam_l1[v] > 0 } */
struct ActiveSets {
    std::vector<std::uint32_t> e_plus;
    std::vector<vertex_t> v_plus;
};

/* strictly positive per-vertex coefficients (Lipschitz metric, quadratic
 * approximation Hessians, prox metrics) */
struct DiagonalMetric {
    std::vector<double> coeffs;
};

struct GraphProblem {
    vertex_t num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<double> y;      // observed value, 0 where unobserved
    std::vector<double> lam_l2; // fidelity weight, >= 0
    std::vector<double> lam_d1; // per-edge tv weight, >= 0
    std::vector<double> lam_l1; // l1 weight, >= 0
    std::vector<double> mu;     // per-edge border length, empty when absent
    std::vector<double> nu;     // per-vertex extensive quantity, empty when absent
    ActiveSets active;

    bool has_mu() const { return !mu.empty(); }
    bool has_nu() const { return !nu.empty(); }
};

/* normalize edges to u < v, build the active sets and enforce the structural
 * invariants: endpoints in range, no self-loop, no duplicate undirected edge,
 * finite nonnegative coefficients, mu > 0 where present, and every vertex
 * covered by at least one of lam_l1 > 0, an incident edge with lam_d1 > 0,
 * or lam_l2 > 0; throws ValidationError */
GraphProblem make_problem(vertex_t num_vertices, std::vector<Edge> edges,
    std::vector<double> y, std::vector<double> lam_l2,
    std::vector<double> lam_d1, std::vector<double> lam_l1,
    std::vector<double> mu = {}, std::vector<double> nu = {});

/* F(x); rejects mismatched lengths and non-finite x */
double objective_value(const GraphProblem& p, std::span<const double> x,
    int threads = 1);

/* gradient of the quadratic part, coordinate v: lam_l2_v (x_v - y_v) */
void grad_f(const GraphProblem& p, std::span<const double> x,
    std::span<double> g, int threads = 1);
std::vector<double> grad_f(const GraphProblem& p, std::span<const double> x,
    int threads = 1);

/* diagonal metric L dominating the Hessian of the quadratic part:
 * l_v = lam_l2_v where positive, the given fallback elsewhere */
DiagonalMetric lipschitz_metric(const GraphProblem& p, double fallback);

/* scale-matched fallback: mean of the positive fidelity weights, 1 if none */
double default_lipschitz_fallback(const GraphProblem& p);

/* tolerance below which a difference counts as zero in |.|_0 metrics */
double default_zero_tol(const GraphProblem& p); // 1e-9 (max|y| + 1)

/* sum_e mu_e |y_u - y_v|_0 / sum_e mu_e |x_u - x_v|_0, where |d|_0 is 1 when
 * |d| > zero_tol; +infinity when the denominator vanishes; requires mu */
double compression_ratio(const GraphProblem& p, std::span<const double> x,
    double zero_tol);

/* sqrt(sum_v nu_v (x_v - y_v)^2) / sqrt(sum_v nu_v (y_v - ybar)^2) with ybar
 * the nu-weighted mean of y; requires nu with positive total weight and y
 * nonconstant on the support of nu */
double relative_error(const GraphProblem& p, std::span<const double> x);

} // namespace pgfb
