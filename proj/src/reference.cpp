#include "pgfb/reference.hpp"

#include <cmath>

#include "pgfb/parallel.hpp"
#include "pgfb/prox.hpp"

namespace pgfb::reference {

namespace {

/* ascending-index sum over fixed blocks, same convention as det_sum */
template <typename F>
double block_sum(std::size_t n, F&& term)
{
    double total = 0.0;
    for (std::size_t begin = 0; begin < n; begin += sum_block){
        const std::size_t end = begin + sum_block < n ? begin + sum_block : n;
        double s = 0.0;
        for (std::size_t i = begin; i < end; i++){ s += term(i); }
        total += s;
    }
    return total;
}

} // namespace

double objective(const GraphProblem& p, std::span<const double> x)
{
    const double fid = block_sum(p.num_vertices, [&](std::size_t v){
        const double d = x[v] - p.y[v];
        return p.lam_l2[v]*d*d;
    });
    const double tv = block_sum(p.edges.size(), [&](std::size_t e){
        return p.lam_d1[e]*std::fabs(x[p.edges[e].u] - x[p.edges[e].v]);
    });
    const double l1 = block_sum(p.num_vertices, [&](std::size_t v){
        return p.lam_l1[v]*std::fabs(x[v]);
    });
    return 0.5*fid + tv + l1;
}

Solver::Solver(const GraphProblem& p, const SolverConfig& cfg)
    : p_(p), cfg_(cfg)
{
    const double fb = cfg_.lipschitz_fallback > 0.0 ? cfg_.lipschitz_fallback
        : default_lipschitz_fallback(p_);
    const DiagonalMetric L = lipschitz_metric(p_, fb);
    const QuadApprox qa = quad_approx_cold(p_);
    pc_ = build_weights(p_,
        build_gamma(p_, qa, L, cfg_.rho, cfg_.delta, cfg_.gamma_mode),
        qa, cfg_.weight_mode);
    res_support_ = residual_support(pc_);
    store_residual_ = cfg_.weight_mode == WeightMode::shape_preserving
        && cfg_.rho != 1.0 && !res_support_.empty();

    const std::size_t V = p_.num_vertices;
    const std::size_t nE = p_.active.e_plus.size();
    incident_.resize(V);
    for (std::uint32_t e = 0; e < nE; e++){
        const Edge ed = p_.edges[p_.active.e_plus[e]];
        incident_[ed.u].push_back({e, 0});
        incident_[ed.v].push_back({e, 1});
    }
    v_plus_pos_.assign(V, 0);
    for (std::size_t i = 0; i < p_.active.v_plus.size(); i++){
        v_plus_pos_[p_.active.v_plus[i]] = (std::uint32_t) i;
    }
    res_pos_.assign(V, 0);
    for (std::size_t i = 0; i < res_support_.size(); i++){
        res_pos_[res_support_[i]] = (std::uint32_t) i;
    }

    z_.z_edge.resize(2*nE);
    for (std::size_t e = 0; e < nE; e++){
        const Edge ed = p_.edges[p_.active.e_plus[e]];
        z_.z_edge[2*e] = p_.y[ed.u];
        z_.z_edge[2*e + 1] = p_.y[ed.v];
    }
    z_.z_vertex.resize(p_.active.v_plus.size());
    for (std::size_t i = 0; i < p_.active.v_plus.size(); i++){
        z_.z_vertex[i] = p_.y[p_.active.v_plus[i]];
    }
    if (store_residual_){
        z_.z_residual.resize(res_support_.size());
        for (std::size_t i = 0; i < res_support_.size(); i++){
            z_.z_residual[i] = p_.y[res_support_[i]];
        }
    }

    /* x <- sum_i W_i z_i, same per-coordinate order as the step */
    x_.resize(V);
    for (std::size_t v = 0; v < V; v++){
        double acc = 0.0;
        for (auto [e, side] : incident_[v]){
            acc += pc_.w_edge[e][side]*z_.z_edge[2*e + side];
        }
        if (p_.lam_l1[v] > 0.0){
            acc += pc_.w_vertex[v_plus_pos_[v]]*z_.z_vertex[v_plus_pos_[v]];
        }
        if (pc_.w_residual[v] > 0.0){
            acc += pc_.w_residual[v]*(store_residual_
                ? z_.z_residual[res_pos_[v]] : p_.y[v]);
        }
        x_[v] = acc;
    }
}

void Solver::step()
{
    const std::size_t V = p_.num_vertices;
    const std::size_t nE = p_.active.e_plus.size();
    const std::size_t nV = p_.active.v_plus.size();
    const double rho = cfg_.rho;

    std::vector<double> bx(V), pv(V);
    for (std::size_t v = 0; v < V; v++){
        bx[v] = p_.lam_l2[v]*(x_[v] - p_.y[v]);
        pv[v] = 2.0*x_[v] - pc_.gamma[v]*bx[v];
    }
    for (std::size_t e = 0; e < nE; e++){
        const std::uint32_t ge = p_.active.e_plus[e];
        const Edge ed = p_.edges[ge];
        const auto [ru, rv] = prox_pair_diff(pv[ed.u] - z_.z_edge[2*e],
            pv[ed.v] - z_.z_edge[2*e + 1], p_.lam_d1[ge],
            pc_.w_edge[e][0]/pc_.gamma[ed.u],
            pc_.w_edge[e][1]/pc_.gamma[ed.v]);
        z_.z_edge[2*e] += rho*(ru - x_[ed.u]);
        z_.z_edge[2*e + 1] += rho*(rv - x_[ed.v]);
    }
    for (std::size_t i = 0; i < nV; i++){
        const vertex_t v = p_.active.v_plus[i];
        const double r = prox_abs_scaled(pv[v] - z_.z_vertex[i],
            p_.lam_l1[v], pc_.w_vertex[i]/pc_.gamma[v]);
        z_.z_vertex[i] += rho*(r - x_[v]);
    }
    if (store_residual_){
        for (std::size_t i = 0; i < res_support_.size(); i++){
            const vertex_t v = res_support_[i];
            z_.z_residual[i] += rho*(pv[v] - x_[v] - z_.z_residual[i]);
        }
    }

    /* aggregation: per coordinate, incident edges ascending, then the vertex
     * functional, then the residual term */
    std::vector<double> xn(V);
    for (std::size_t v = 0; v < V; v++){
        double acc = 0.0;
        for (auto [e, side] : incident_[v]){
            acc += pc_.w_edge[e][side]*z_.z_edge[2*e + side];
        }
        if (p_.lam_l1[v] > 0.0){
            acc += pc_.w_vertex[v_plus_pos_[v]]*z_.z_vertex[v_plus_pos_[v]];
        }
        if (pc_.w_residual[v] > 0.0){
            const double zr = store_residual_ ? z_.z_residual[res_pos_[v]]
                : pv[v] - x_[v];
            acc += pc_.w_residual[v]*zr;
        }
        xn[v] = acc;
    }
    x_ = std::move(xn);
}

} // namespace pgfb::reference
