/*=============================================================================
 * Diagonal preconditioners for the generalized forward-backward splitting.
 *
 * Per-functional quadratic approximations yield diagonal Hessian surrogates;
 * a global step metric Gamma is derived from them and capped by the Lipschitz
 * metric, per-functional splitting weights are normalized into a partition of
 * identity (exactly, or up to a positive residual operator), and on
 * reconditioning the auxiliary variables are remapped so that an almost
 * converged iterate stays almost converged.
 *===========================================================================*/
#pragma once
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pgfb/graph_problem.hpp"

namespace pgfb {

/* per-functional diagonal Hessian coefficients; edge functionals carry one
 * common coefficient for both endpoints (off-diagonal terms dropped) */
struct QuadApprox {
    std::vector<double> m_f;      // smooth part, per vertex (= lam_l2)
    std::vector<double> m_edge;   // per active edge
    std::vector<double> m_vertex; // per active vertex
};

enum class GammaMode {
    smooth_only,     // step metric from the smooth part alone
    whole_functional // step metric from the whole functional (default)
};

enum class WeightMode {
    coordinate_scaled, // normalize each coordinate separately; no residual
    shape_preserving   // scalar scaling per functional; positive residual
};

struct Preconditioner {
    std::vector<double> gamma;                 // per vertex, > 0
    std::vector<std::array<double, 2>> w_edge; // per active edge (u, v sides)
    std::vector<double> w_vertex;              // per active vertex
    std::vector<double> w_residual;            // per vertex; all 0 in
                                               // coordinate_scaled mode
    WeightMode weight_mode = WeightMode::coordinate_scaled;
};

/* floor keeping the safeguards strictly positive when the iterate vanishes */
inline constexpr double eps_floor = 1e-300;

/* Hessian surrogate of lam |x_v| at xhat_v: lam / max(|xhat_v|, eps) */
double quad_approx_vertex(double xhat_v, double lam_l1_v, double eps_l1);

/* diagonal Hessian surrogate of lam |x_u - x_v| at xhat:
 * lam / max(|xhat_u - xhat_v|, eps), same value at both endpoints */
double quad_approx_edge(double xhat_u, double xhat_v, double lam_d1,
    double eps_d1);

/* safeguards at the current iterate: eps_l1 is a millionth of the mean
 * amplitude, per-active-edge eps_d1 = max(|xhat_u|/10, eps_l1) with u the
 * edge's first endpoint */
struct EpsDefaults {
    double eps_l1;
    std::vector<double> eps_d1; // per active edge
};
EpsDefaults eps_defaults(const GraphProblem& p, std::span<const double> xhat);

/* quadratic approximations at an iterate */
QuadApprox quad_approx_at(const GraphProblem& p, std::span<const double> xhat);

/* coarse cold-start approximations: amplitudes and absolute differences are
 * both replaced by the mean amplitude of the observed values (vertices with
 * positive fidelity weight; 1 when there are none) */
QuadApprox quad_approx_cold(const GraphProblem& p);

/* step metric: gamma_j = min{ delta (4 - 2 rho_bar) / l_j, gamma_tilde_j }
 * with gamma_tilde the inverse of the smooth-part Hessian (smooth_only) or of
 * the whole-functional Hessian sum (whole_functional) */
std::vector<double> build_gamma(const GraphProblem& p, const QuadApprox& qa,
    const DiagonalMetric& L, double rho_bar, double delta, GammaMode mode);

/* splitting weights w_ij from gamma_j m_ij, normalized per coordinate
 * (coordinate_scaled) or per functional by the tightest coordinate sum
 * (shape_preserving, leaving the residual diag(1 - sum_i w_ij) >= 0) */
Preconditioner build_weights(const GraphProblem& p,
    std::span<const double> gamma, const QuadApprox& qa, WeightMode mode);

/* auxiliary variables of the tight splitting: one pair per active edge
 * (embedded u and v coordinates), one scalar per active vertex, and the
 * residual-functional variable restricted to its support when it is stored */
struct AuxiliaryVariables {
    std::vector<double> z_edge;     // 2 per active edge: [2e], [2e+1]
    std::vector<double> z_vertex;   // per active vertex
    std::vector<double> z_residual; // per residual-support vertex
    std::size_t size() const
    {
        return z_edge.size() + z_vertex.size() + z_residual.size();
    }
};

/* ascending vertices with a positive residual weight */
std::vector<vertex_t> residual_support(const Preconditioner& pc);

/* remap the auxiliary variables after rebuilding the preconditioners at x,
 * bx = grad of the smooth part at x:
 *   y_ij = (w_ij / gamma_j) (x_j - gamma_j bx_j - z_ij)
 *   z_ij <- (x_j - gamma_hat_j bx_j) - (gamma_hat_j / w_hat_ij) y_ij
 * the residual variable carries the zero operator, so when stored it is reset
 * to x - Gamma_hat bx on the new support */
AuxiliaryVariables recondition(const GraphProblem& p,
    std::span<const double> x, std::span<const double> bx,
    const Preconditioner& old_pc, const Preconditioner& new_pc,
    const AuxiliaryVariables& z, bool store_residual);

} // namespace pgfb
