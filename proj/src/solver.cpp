#include "pgfb/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "pgfb/parallel.hpp"
#include "pgfb/ppd.hpp"
#include "pgfb/prox.hpp"

namespace pgfb {

namespace {

constexpr std::uint32_t npos32 = 0xffffffffu;

void check_config(const SolverConfig& cfg)
{
    if (!(cfg.rho > 0.0) || cfg.rho >= 2.0){
        throw ConfigError("relaxation rho must lie in (0, 2)");
    }
    if (!(cfg.delta > 0.0) || cfg.delta >= 1.0){
        throw ConfigError("delta must lie in (0, 1)");
    }
    if (!(cfg.tol >= 0.0)){
        throw ConfigError("tol must be >= 0");
    }
    if (!(cfg.recond_threshold >= 0.0)){
        throw ConfigError("recond_threshold must be >= 0");
    }
    if (!(cfg.recond_divisor > 1.0)){
        throw ConfigError("recond_divisor must be > 1");
    }
    if (cfg.max_reconditionings < 0){
        throw ConfigError("max_reconditionings must be >= 0");
    }
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
}

} // namespace

/*  PgfbSolver  */

PgfbSolver::PgfbSolver(const GraphProblem& p, const SolverConfig& cfg)
    : PgfbSolver(p, cfg, AuxiliaryVariables{})
{}

PgfbSolver::PgfbSolver(const GraphProblem& p, const SolverConfig& cfg,
    AuxiliaryVariables z0)
    : p_(p), cfg_(cfg)
{
    check_config(cfg_);
    cfg_.threads = resolve_threads(cfg_.threads);
    theta_ = cfg_.recond_threshold;

    const double fb = cfg_.lipschitz_fallback > 0.0 ? cfg_.lipschitz_fallback
        : default_lipschitz_fallback(p_);
    L_ = lipschitz_metric(p_, fb);

    build_structures();

    const QuadApprox qa = quad_approx_cold(p_);
    std::vector<double> gamma = build_gamma(p_, qa, L_, cfg_.rho, cfg_.delta,
        cfg_.gamma_mode);
    set_preconditioner(build_weights(p_, gamma, qa, cfg_.weight_mode));

    const std::size_t nE = p_.active.e_plus.size();
    const std::size_t nV = p_.active.v_plus.size();
    if (z0.z_edge.empty() && z0.z_vertex.empty() && z0.z_residual.empty()){
        z_.z_edge.resize(2*nE);
        for (std::size_t e = 0; e < nE; e++){
            const Edge ed = p_.edges[p_.active.e_plus[e]];
            z_.z_edge[2*e] = p_.y[ed.u];
            z_.z_edge[2*e + 1] = p_.y[ed.v];
        }
        z_.z_vertex.resize(nV);
        for (std::size_t i = 0; i < nV; i++){
            z_.z_vertex[i] = p_.y[p_.active.v_plus[i]];
        }
        if (store_residual_){
            z_.z_residual.resize(res_support_.size());
            for (std::size_t i = 0; i < res_support_.size(); i++){
                z_.z_residual[i] = p_.y[res_support_[i]];
            }
        }
    }else{
        if (z0.z_edge.size() != 2*nE || z0.z_vertex.size() != nV
            || (store_residual_
                && z0.z_residual.size() != res_support_.size())
            || (!store_residual_ && !z0.z_residual.empty())){
            throw std::invalid_argument("z0 dimensions do not match the "
                "active sets");
        }
        z_ = std::move(z0);
    }

    /* x <- sum_i W_i z_i; the residual term of the initialization uses the
     * stored variable only, so without storage start from its fixed default
     * p - x at a stationary guess, i.e. the observation itself */
    x_.assign(p_.num_vertices, 0.0);
    x_prev_.assign(p_.num_vertices, 0.0);
    bx_.assign(p_.num_vertices, 0.0);
    p_vec_.assign(p_.num_vertices, 0.0);
    std::vector<double> x0(p_.num_vertices);
    const std::int64_t V = p_.num_vertices;
    for (std::int64_t v = 0; v < V; v++){
        double acc = 0.0;
        for (std::uint32_t a = adj_start_[v]; a < adj_start_[v + 1]; a++){
            const std::uint32_t e = adj_[a] >> 1, side = adj_[a] & 1u;
            acc += pc_.w_edge[e][side]*z_.z_edge[2*e + side];
        }
        if (v_plus_pos_[v] != npos32){
            acc += pc_.w_vertex[v_plus_pos_[v]]*z_.z_vertex[v_plus_pos_[v]];
        }
        if (pc_.w_residual[v] > 0.0){
            acc += pc_.w_residual[v]*(store_residual_
                ? z_.z_residual[res_pos_[v]] : p_.y[v]);
        }
        x0[v] = acc;
    }
    x_ = std::move(x0);
}

void PgfbSolver::build_structures()
{
    const std::size_t V = p_.num_vertices;
    const std::size_t nE = p_.active.e_plus.size();

    v_plus_pos_.assign(V, npos32);
    for (std::size_t i = 0; i < p_.active.v_plus.size(); i++){
        v_plus_pos_[p_.active.v_plus[i]] = (std::uint32_t) i;
    }

    adj_start_.assign(V + 1, 0);
    for (std::size_t e = 0; e < nE; e++){
        const Edge ed = p_.edges[p_.active.e_plus[e]];
        adj_start_[ed.u + 1]++;
        adj_start_[ed.v + 1]++;
    }
    for (std::size_t v = 0; v < V; v++){
        adj_start_[v + 1] += adj_start_[v];
    }
    adj_.resize(adj_start_[V]);
    std::vector<std::uint32_t> fill(adj_start_.begin(), adj_start_.end() - 1);
    for (std::size_t e = 0; e < nE; e++){ // ascending e: per-vertex lists
        const Edge ed = p_.edges[p_.active.e_plus[e]]; // stay ascending too
        adj_[fill[ed.u]++] = (std::uint32_t) (e << 1);
        adj_[fill[ed.v]++] = (std::uint32_t) (e << 1) | 1u;
    }
}

void PgfbSolver::set_preconditioner(Preconditioner pc)
{
    pc_ = std::move(pc);
    store_residual_ = pc_.weight_mode == WeightMode::shape_preserving
        && cfg_.rho != 1.0;
    res_support_ = residual_support(pc_);
    if (res_support_.empty()){ store_residual_ = false; }
    res_pos_.assign(p_.num_vertices, npos32);
    for (std::size_t i = 0; i < res_support_.size(); i++){
        res_pos_[res_support_[i]] = (std::uint32_t) i;
    }
    check_relaxation_bound();
}

void PgfbSolver::check_relaxation_bound() const
{
    double m = 0.0;
    for (std::size_t v = 0; v < p_.num_vertices; v++){
        m = std::max(m, pc_.gamma[v]*L_.coeffs[v]);
    }
    if (!(cfg_.rho < 2.0 - 0.5*m)){
        throw ConfigError("relaxation rho = " + std::to_string(cfg_.rho)
            + " violates the bound 2 - ||L^1/2 Gamma L^1/2|| / 2 = "
            + std::to_string(2.0 - 0.5*m));
    }
}

void PgfbSolver::step()
{
    const std::int64_t V = p_.num_vertices;
    const std::int64_t nE = (std::int64_t) p_.active.e_plus.size();
    const std::int64_t nV = (std::int64_t) p_.active.v_plus.size();
    const std::int64_t nR = store_residual_
        ? (std::int64_t) res_support_.size() : 0;
    const int threads = cfg_.threads;
    const double rho = cfg_.rho;
    std::int64_t bad = 0;

    /* one parallel region per iteration; the backward loops write disjoint
     * auxiliary coordinates and need no barrier between them */
    #pragma omp parallel num_threads(threads) if(threads > 1) \
        reduction(+:bad)
    {
        /* forward step: p = 2x - Gamma grad f(x) */
        #pragma omp for schedule(static)
        for (std::int64_t v = 0; v < V; v++){
            bx_[v] = p_.lam_l2[v]*(x_[v] - p_.y[v]);
            p_vec_[v] = 2.0*x_[v] - pc_.gamma[v]*bx_[v];
        }
        #pragma omp for schedule(static) nowait
        for (std::int64_t e = 0; e < nE; e++){
            const std::uint32_t ge = p_.active.e_plus[e];
            const Edge ed = p_.edges[ge];
            const auto [ru, rv] = prox_pair_diff(
                p_vec_[ed.u] - z_.z_edge[2*e],
                p_vec_[ed.v] - z_.z_edge[2*e + 1],
                p_.lam_d1[ge],
                pc_.w_edge[e][0]/pc_.gamma[ed.u],
                pc_.w_edge[e][1]/pc_.gamma[ed.v]);
            z_.z_edge[2*e] += rho*(ru - x_[ed.u]);
            z_.z_edge[2*e + 1] += rho*(rv - x_[ed.v]);
        }
        #pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < nV; i++){
            const vertex_t v = p_.active.v_plus[i];
            const double r = prox_abs_scaled(p_vec_[v] - z_.z_vertex[i],
                p_.lam_l1[v], pc_.w_vertex[i]/pc_.gamma[v]);
            z_.z_vertex[i] += rho*(r - x_[v]);
        }
        /* identity resolvent: z <- (1 - rho) z + rho (p - x); the implicit
         * barrier also closes the two loops above */
        #pragma omp for schedule(static)
        for (std::int64_t i = 0; i < nR; i++){
            const vertex_t v = res_support_[i];
            z_.z_residual[i] += rho*(p_vec_[v] - x_[v] - z_.z_residual[i]);
        }
        /* aggregation: per coordinate, incident edges ascending, then the
         * vertex functional, then the residual term */
        #pragma omp for schedule(static)
        for (std::int64_t v = 0; v < V; v++){
            double acc = 0.0;
            for (std::uint32_t a = adj_start_[v]; a < adj_start_[v + 1];
                a++){
                const std::uint32_t e = adj_[a] >> 1, side = adj_[a] & 1u;
                acc += pc_.w_edge[e][side]*z_.z_edge[2*e + side];
            }
            if (v_plus_pos_[v] != npos32){
                acc += pc_.w_vertex[v_plus_pos_[v]]
                    *z_.z_vertex[v_plus_pos_[v]];
            }
            if (pc_.w_residual[v] > 0.0){
                /* without storage rho = 1: z_res was just set to p - x */
                const double zr = store_residual_
                    ? z_.z_residual[res_pos_[v]] : p_vec_[v] - x_[v];
                acc += pc_.w_residual[v]*zr;
            }
            x_prev_[v] = acc;
            bad += std::isfinite(acc) ? 0 : 1;
        }
    }

    x_.swap(x_prev_); // x_ = new iterate, x_prev_ = previous one
    iter_++;

    if (bad){
        throw NumericalError("non-finite iterate at iteration "
            + std::to_string(iter_));
    }
}

double PgfbSolver::fixed_point_residual() const
{
    if (iter_ == 0){
        throw std::logic_error("fixed_point_residual: no iteration yet");
    }
    return det_rel_change(x_, x_prev_, cfg_.threads);
}

void PgfbSolver::recondition_now()
{
    grad_f(p_, x_, bx_, cfg_.threads);
    const QuadApprox qa = quad_approx_at(p_, x_);
    std::vector<double> gamma = build_gamma(p_, qa, L_, cfg_.rho, cfg_.delta,
        cfg_.gamma_mode);
    Preconditioner next = build_weights(p_, gamma, qa, cfg_.weight_mode);
    const Preconditioner old = std::move(pc_);
    const bool want_residual = next.weight_mode
        == WeightMode::shape_preserving && cfg_.rho != 1.0;
    AuxiliaryVariables znew = recondition(p_, x_, bx_, old, next, z_,
        want_residual);
    set_preconditioner(std::move(next));
    if (!store_residual_){ znew.z_residual.clear(); }
    z_ = std::move(znew);
    theta_ /= cfg_.recond_divisor;
    recond_count_++;
}

SolveResult PgfbSolver::run()
{
    ConvergenceTrace trace;
    trace.records.reserve(cfg_.max_iter < 65536 ? cfg_.max_iter : 65536);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = iter_; k < cfg_.max_iter;){
        step();
        k = iter_;
        const double r = fixed_point_residual();
        const double obj = objective_value(p_, x_, cfg_.threads);
        if (!std::isfinite(obj)){
            throw NumericalError("non-finite objective at iteration "
                + std::to_string(k));
        }
        const bool stop = r <= cfg_.tol;
        bool recond = false;
        if (!stop && theta_ > 0.0 && recond_count_ < cfg_.max_reconditionings
            && r < theta_){
            recondition_now();
            recond = true;
        }
        trace.records.push_back({k, obj, r, elapsed_seconds(t0), recond});
        if (stop){ break; }
    }
    return {x_, std::move(trace)};
}

/*  GfbScalarSolver  */

GfbScalarSolver::GfbScalarSolver(const GraphProblem& p,
    const SolverConfig& cfg)
    : p_(p), cfg_(cfg)
{
    check_config(cfg_);
    cfg_.threads = resolve_threads(cfg_.threads);
    const std::size_t n = p_.active.e_plus.size() + p_.active.v_plus.size();
    if (n == 0){
        throw ConfigError("gfb-scalar requires at least one active edge or "
            "vertex functional");
    }
    const double fb = cfg_.lipschitz_fallback > 0.0 ? cfg_.lipschitz_fallback
        : default_lipschitz_fallback(p_);
    const DiagonalMetric L = lipschitz_metric(p_, fb);
    double lmax = 0.0;
    for (double l : L.coeffs){ lmax = std::max(lmax, l); }
    gamma_ = cfg_.delta*(4.0 - 2.0*cfg_.rho)/lmax;
    weight_ = 1.0/(double) n;
    if (!(cfg_.rho < 2.0 - 0.5*gamma_*lmax)){
        throw ConfigError("relaxation rho violates the scalar step bound");
    }
    z_.assign(n, p_.y);
    x_ = p_.y;
    x_prev_.assign(p_.num_vertices, 0.0);
    bx_.assign(p_.num_vertices, 0.0);
}

void GfbScalarSolver::step()
{
    const std::size_t V = p_.num_vertices;
    const std::size_t nE = p_.active.e_plus.size();
    const double rho = cfg_.rho, m = weight_/gamma_;

    grad_f(p_, x_, bx_);
    std::vector<double> pv(V);
    for (std::size_t v = 0; v < V; v++){
        pv[v] = 2.0*x_[v] - gamma_*bx_[v];
    }
    /* every functional sees the full space: off-support coordinates pass
     * through the resolvent unchanged */
    for (std::size_t i = 0; i < z_.size(); i++){
        std::vector<double>& zi = z_[i];
        if (i < nE){
            const std::uint32_t ge = p_.active.e_plus[i];
            const Edge ed = p_.edges[ge];
            const auto [ru, rv] = prox_pair_diff(pv[ed.u] - zi[ed.u],
                pv[ed.v] - zi[ed.v], p_.lam_d1[ge], m, m);
            for (std::size_t w = 0; w < V; w++){
                const double jw = w == ed.u ? ru : w == ed.v ? rv
                    : pv[w] - zi[w];
                zi[w] += rho*(jw - x_[w]);
            }
        }else{
            const vertex_t av = p_.active.v_plus[i - nE];
            const double r = prox_abs_scaled(pv[av] - zi[av], p_.lam_l1[av],
                m);
            for (std::size_t w = 0; w < V; w++){
                const double jw = w == av ? r : pv[w] - zi[w];
                zi[w] += rho*(jw - x_[w]);
            }
        }
    }
    x_prev_ = x_;
    for (std::size_t v = 0; v < V; v++){
        double acc = 0.0;
        for (std::size_t i = 0; i < z_.size(); i++){
            acc += weight_*z_[i][v];
        }
        x_[v] = acc;
    }
    iter_++;
    if (any_nonfinite(x_)){
        throw NumericalError("non-finite iterate at iteration "
            + std::to_string(iter_));
    }
}

double GfbScalarSolver::fixed_point_residual() const
{
    if (iter_ == 0){
        throw std::logic_error("fixed_point_residual: no iteration yet");
    }
    return det_rel_change(x_, x_prev_);
}

SolveResult GfbScalarSolver::run()
{
    ConvergenceTrace trace;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t k = iter_; k < cfg_.max_iter;){
        step();
        k = iter_;
        const double r = fixed_point_residual();
        const double obj = objective_value(p_, x_);
        if (!std::isfinite(obj)){
            throw NumericalError("non-finite objective at iteration "
                + std::to_string(k));
        }
        trace.records.push_back({k, obj, r, elapsed_seconds(t0), false});
        if (r <= cfg_.tol){ break; }
    }
    return {x_, std::move(trace)};
}

SolveResult run(const GraphProblem& p, const SolverConfig& cfg)
{
    switch (cfg.algo){
    case Algo::pgfb: return PgfbSolver(p, cfg).run();
    case Algo::gfb_scalar: return GfbScalarSolver(p, cfg).run();
    case Algo::ppd: return ppd_run(p, cfg);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace pgfb
