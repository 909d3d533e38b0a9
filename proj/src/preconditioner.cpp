#include "pgfb/preconditioner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pgfb/parallel.hpp"

namespace pgfb {

double quad_approx_vertex(double xhat_v, double lam_l1_v, double eps_l1)
{
    if (!(lam_l1_v > 0.0)){
        throw std::invalid_argument("quad_approx_vertex: lam_l1 must be > 0 "
            "(vertex not active)");
    }
    if (!(eps_l1 > 0.0)){
        throw std::invalid_argument("quad_approx_vertex: eps_l1 must be > 0");
    }
    return lam_l1_v/std::max(std::fabs(xhat_v), eps_l1);
}

double quad_approx_edge(double xhat_u, double xhat_v, double lam_d1,
    double eps_d1)
{
    if (!(lam_d1 > 0.0)){
        throw std::invalid_argument("quad_approx_edge: lam_d1 must be > 0 "
            "(edge not active)");
    }
    if (!(eps_d1 > 0.0)){
        throw std::invalid_argument("quad_approx_edge: eps_d1 must be > 0");
    }
    return lam_d1/std::max(std::fabs(xhat_u - xhat_v), eps_d1);
}

EpsDefaults eps_defaults(const GraphProblem& p, std::span<const double> xhat)
{
    if (xhat.size() != p.num_vertices){
        throw std::invalid_argument("eps_defaults: dimension mismatch");
    }
    const double mean_amp = det_sum(xhat.size(), 1,
        [&](std::size_t v){ return std::fabs(xhat[v]); })
        /(double) p.num_vertices;
    EpsDefaults eps;
    eps.eps_l1 = std::max(1e-6*mean_amp, eps_floor);
    eps.eps_d1.resize(p.active.e_plus.size());
    for (std::size_t e = 0; e < p.active.e_plus.size(); e++){
        const vertex_t u = p.edges[p.active.e_plus[e]].u;
        eps.eps_d1[e] = std::max(std::fabs(xhat[u])/10.0, eps.eps_l1);
    }
    return eps;
}

QuadApprox quad_approx_at(const GraphProblem& p, std::span<const double> xhat)
{
    const EpsDefaults eps = eps_defaults(p, xhat);
    QuadApprox qa;
    qa.m_f = p.lam_l2;
    qa.m_edge.resize(p.active.e_plus.size());
    for (std::size_t e = 0; e < p.active.e_plus.size(); e++){
        const Edge ed = p.edges[p.active.e_plus[e]];
        qa.m_edge[e] = quad_approx_edge(xhat[ed.u], xhat[ed.v],
            p.lam_d1[p.active.e_plus[e]], eps.eps_d1[e]);
    }
    qa.m_vertex.resize(p.active.v_plus.size());
    for (std::size_t i = 0; i < p.active.v_plus.size(); i++){
        const vertex_t v = p.active.v_plus[i];
        qa.m_vertex[i] = quad_approx_vertex(xhat[v], p.lam_l1[v], eps.eps_l1);
    }
    return qa;
}

QuadApprox quad_approx_cold(const GraphProblem& p)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t v = 0; v < p.num_vertices; v++){
        if (p.lam_l2[v] > 0.0){ sum += std::fabs(p.y[v]); n++; }
    }
    const double amp = std::max(n ? sum/(double) n : 1.0, eps_floor);
    QuadApprox qa;
    qa.m_f = p.lam_l2;
    qa.m_edge.resize(p.active.e_plus.size());
    for (std::size_t e = 0; e < p.active.e_plus.size(); e++){
        qa.m_edge[e] = p.lam_d1[p.active.e_plus[e]]/amp;
    }
    qa.m_vertex.resize(p.active.v_plus.size());
    for (std::size_t i = 0; i < p.active.v_plus.size(); i++){
        qa.m_vertex[i] = p.lam_l1[p.active.v_plus[i]]/amp;
    }
    return qa;
}

std::vector<double> build_gamma(const GraphProblem& p, const QuadApprox& qa,
    const DiagonalMetric& L, double rho_bar, double delta, GammaMode mode)
{
    if (!(rho_bar > 0.0) || rho_bar >= 2.0){
        throw ConfigError("build_gamma: rho_bar must lie in (0, 2)");
    }
    if (!(delta > 0.0) || delta >= 1.0){
        throw ConfigError("build_gamma: delta must lie in (0, 1)");
    }
    if (L.coeffs.size() != p.num_vertices){
        throw std::invalid_argument("build_gamma: metric length mismatch");
    }

    const std::size_t V = p.num_vertices;
    std::vector<double> divisor = qa.m_f;
    if (mode == GammaMode::whole_functional){
        for (std::size_t e = 0; e < p.active.e_plus.size(); e++){
            const Edge ed = p.edges[p.active.e_plus[e]];
            divisor[ed.u] += qa.m_edge[e];
            divisor[ed.v] += qa.m_edge[e];
        }
        for (std::size_t i = 0; i < p.active.v_plus.size(); i++){
            divisor[p.active.v_plus[i]] += qa.m_vertex[i];
        }
    }

    std::vector<double> gamma(V);
    const double margin = delta*(4.0 - 2.0*rho_bar);
    for (std::size_t j = 0; j < V; j++){
        if (!(divisor[j] > 0.0)){
            throw ValidationError("build_gamma: vertex " + std::to_string(j)
                + " has no quadratic information ("
                + (mode == GammaMode::smooth_only
                    ? "no fidelity weight; use the whole-functional mode"
                    : "uncovered coordinate") + ")");
        }
        gamma[j] = std::min(margin/L.coeffs[j], 1.0/divisor[j]);
    }
    return gamma;
}

Preconditioner build_weights(const GraphProblem& p,
    std::span<const double> gamma, const QuadApprox& qa, WeightMode mode)
{
    if (gamma.size() != p.num_vertices){
        throw std::invalid_argument("build_weights: gamma length mismatch");
    }
    const std::size_t nE = p.active.e_plus.size();
    const std::size_t nV = p.active.v_plus.size();

    Preconditioner pc;
    pc.weight_mode = mode;
    pc.gamma.assign(gamma.begin(), gamma.end());
    pc.w_edge.resize(nE);
    pc.w_vertex.resize(nV);
    pc.w_residual.assign(p.num_vertices, 0.0);

    /* first approximation w~_ij = gamma_j m_ij and coordinate sums s~_j */
    std::vector<double> stilde(p.num_vertices, 0.0);
    for (std::size_t e = 0; e < nE; e++){
        const Edge ed = p.edges[p.active.e_plus[e]];
        pc.w_edge[e][0] = gamma[ed.u]*qa.m_edge[e];
        pc.w_edge[e][1] = gamma[ed.v]*qa.m_edge[e];
        stilde[ed.u] += pc.w_edge[e][0];
        stilde[ed.v] += pc.w_edge[e][1];
    }
    for (std::size_t i = 0; i < nV; i++){
        const vertex_t v = p.active.v_plus[i];
        pc.w_vertex[i] = gamma[v]*qa.m_vertex[i];
        stilde[v] += pc.w_vertex[i];
    }

    if (mode == WeightMode::coordinate_scaled){
        for (std::size_t j = 0; j < p.num_vertices; j++){
            if (!(stilde[j] > 0.0)){
                throw ValidationError("build_weights: vertex "
                    + std::to_string(j) + " is covered by no functional; use "
                    "the shape-preserving mode");
            }
        }
        for (std::size_t e = 0; e < nE; e++){
            const Edge ed = p.edges[p.active.e_plus[e]];
            pc.w_edge[e][0] /= stilde[ed.u];
            pc.w_edge[e][1] /= stilde[ed.v];
        }
        for (std::size_t i = 0; i < nV; i++){
            pc.w_vertex[i] /= stilde[p.active.v_plus[i]];
        }
    }else{
        /* tightest per-functional scalar: s_i = sup{ s~_j, j in support } */
        for (std::size_t e = 0; e < nE; e++){
            const Edge ed = p.edges[p.active.e_plus[e]];
            const double si = std::max(stilde[ed.u], stilde[ed.v]);
            pc.w_edge[e][0] /= si;
            pc.w_edge[e][1] /= si;
        }
        for (std::size_t i = 0; i < nV; i++){
            pc.w_vertex[i] /= stilde[p.active.v_plus[i]];
        }
        std::vector<double> cover(p.num_vertices, 0.0);
        for (std::size_t e = 0; e < nE; e++){
            const Edge ed = p.edges[p.active.e_plus[e]];
            cover[ed.u] += pc.w_edge[e][0];
            cover[ed.v] += pc.w_edge[e][1];
        }
        for (std::size_t i = 0; i < nV; i++){
            cover[p.active.v_plus[i]] += pc.w_vertex[i];
        }
        for (std::size_t j = 0; j < p.num_vertices; j++){
            double r = 1.0 - cover[j];
            /* mathematically >= 0; guard division rounding */
            if (r < 0.0 && r > -1e-12){ r = 0.0; }
            if (r < 0.0){
                throw NumericalError("build_weights: negative residual "
                    "weight at vertex " + std::to_string(j));
            }
            pc.w_residual[j] = r;
        }
    }
    return pc;
}

std::vector<vertex_t> residual_support(const Preconditioner& pc)
{
    std::vector<vertex_t> support;
    for (std::size_t j = 0; j < pc.w_residual.size(); j++){
        if (pc.w_residual[j] > 0.0){ support.push_back((vertex_t) j); }
    }
    return support;
}

AuxiliaryVariables recondition(const GraphProblem& p,
    std::span<const double> x, std::span<const double> bx,
    const Preconditioner& old_pc, const Preconditioner& new_pc,
    const AuxiliaryVariables& z, bool store_residual)
{
    const std::size_t nE = p.active.e_plus.size();
    const std::size_t nV = p.active.v_plus.size();
    if (x.size() != p.num_vertices || bx.size() != p.num_vertices
        || z.z_edge.size() != 2*nE || z.z_vertex.size() != nV
        || old_pc.gamma.size() != p.num_vertices
        || new_pc.gamma.size() != p.num_vertices){
        throw std::invalid_argument("recondition: dimension mismatch");
    }

    const auto remap = [&](vertex_t j, double w_old, double w_new,
        double zij){
        const double y = w_old/old_pc.gamma[j]
            *(x[j] - old_pc.gamma[j]*bx[j] - zij);
        return (x[j] - new_pc.gamma[j]*bx[j]) - new_pc.gamma[j]/w_new*y;
    };

    AuxiliaryVariables out;
    out.z_edge.resize(2*nE);
    out.z_vertex.resize(nV);
    for (std::size_t e = 0; e < nE; e++){
        const Edge ed = p.edges[p.active.e_plus[e]];
        out.z_edge[2*e] = remap(ed.u, old_pc.w_edge[e][0],
            new_pc.w_edge[e][0], z.z_edge[2*e]);
        out.z_edge[2*e + 1] = remap(ed.v, old_pc.w_edge[e][1],
            new_pc.w_edge[e][1], z.z_edge[2*e + 1]);
    }
    for (std::size_t i = 0; i < nV; i++){
        const vertex_t v = p.active.v_plus[i];
        out.z_vertex[i] = remap(v, old_pc.w_vertex[i], new_pc.w_vertex[i],
            z.z_vertex[i]);
    }
    if (store_residual){
        /* the residual functional is the zero operator: y_i = 0 */
        const std::vector<vertex_t> support = residual_support(new_pc);
        out.z_residual.resize(support.size());
        for (std::size_t i = 0; i < support.size(); i++){
            const vertex_t j = support[i];
            out.z_residual[i] = x[j] - new_pc.gamma[j]*bx[j];
        }
    }
    return out;
}

} // namespace pgfb
