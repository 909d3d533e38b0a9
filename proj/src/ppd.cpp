#include "pgfb/ppd.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pgfb/parallel.hpp"

namespace pgfb {

void SplitOperatorK::apply(std::span<const double> x, std::span<double> out,
    int threads) const
{
    if (x.size() != col_start.size() - 1 || out.size() != num_rows){
        throw std::invalid_argument("SplitOperatorK::apply: dimension "
            "mismatch");
    }
    const std::int64_t nR = (std::int64_t) num_rows;
    const std::int64_t nEr = (std::int64_t) num_edge_rows;
    #pragma omp parallel for schedule(static) num_threads(threads) \
        if(threads > 1)
    for (std::int64_t r = 0; r < nR; r++){
        if (r < nEr){
            const Edge ed = row_edges[r];
            out[r] = row_coef[r]*(x[ed.u] - x[ed.v]);
        }else{
            out[r] = row_coef[r]*x[row_vertices[r - nEr]];
        }
    }
}

void SplitOperatorK::apply_transpose(std::span<const double> d,
    std::span<double> out, int threads) const
{
    if (d.size() != num_rows || out.size() != col_start.size() - 1){
        throw std::invalid_argument("SplitOperatorK::apply_transpose: "
            "dimension mismatch");
    }
    const std::int64_t V = (std::int64_t) out.size();
    #pragma omp parallel for schedule(static) num_threads(threads) \
        if(threads > 1)
    for (std::int64_t v = 0; v < V; v++){
        double acc = 0.0;
        for (std::uint32_t a = col_start[v]; a < col_start[v + 1]; a++){
            const std::uint32_t r = cols[a] >> 1;
            const double c = cols[a] & 1u ? -row_coef[r] : row_coef[r];
            acc += c*d[r];
        }
        out[v] = acc;
    }
}

SplitOperatorK build_k(const GraphProblem& p)
{
    SplitOperatorK k;
    k.num_edge_rows = p.active.e_plus.size();
    k.num_rows = k.num_edge_rows + p.active.v_plus.size();
    k.row_edges.resize(k.num_edge_rows);
    k.row_coef.resize(k.num_rows);
    k.row_vertices.resize(p.active.v_plus.size());
    for (std::size_t e = 0; e < k.num_edge_rows; e++){
        k.row_edges[e] = p.edges[p.active.e_plus[e]];
        k.row_coef[e] = p.lam_d1[p.active.e_plus[e]];
    }
    for (std::size_t i = 0; i < p.active.v_plus.size(); i++){
        k.row_vertices[i] = p.active.v_plus[i];
        k.row_coef[k.num_edge_rows + i] = p.lam_l1[p.active.v_plus[i]];
    }

    k.col_start.assign(p.num_vertices + 1, 0);
    for (std::size_t e = 0; e < k.num_edge_rows; e++){
        k.col_start[k.row_edges[e].u + 1]++;
        k.col_start[k.row_edges[e].v + 1]++;
    }
    for (std::size_t i = 0; i < k.row_vertices.size(); i++){
        k.col_start[k.row_vertices[i] + 1]++;
    }
    for (std::size_t v = 0; v < p.num_vertices; v++){
        k.col_start[v + 1] += k.col_start[v];
    }
    k.cols.resize(k.col_start[p.num_vertices]);
    std::vector<std::uint32_t> fill(k.col_start.begin(),
        k.col_start.end() - 1);
    for (std::size_t e = 0; e < k.num_edge_rows; e++){ // ascending rows
        k.cols[fill[k.row_edges[e].u]++] = (std::uint32_t) (e << 1);
        k.cols[fill[k.row_edges[e].v]++] = (std::uint32_t) (e << 1) | 1u;
    }
    for (std::size_t i = 0; i < k.row_vertices.size(); i++){
        const std::size_t r = k.num_edge_rows + i;
        k.cols[fill[k.row_vertices[i]]++] = (std::uint32_t) (r << 1);
    }
    return k;
}

PpdStepSizes ppd_precond(const GraphProblem& p, const SplitOperatorK& k,
    double alpha)
{
    if (!(alpha >= 0.0) || alpha > 2.0){
        throw ConfigError("ppd_precond: alpha must lie in [0, 2]");
    }
    PpdStepSizes s;
    s.tau.assign(p.num_vertices, 0.0);
    s.sigma.assign(k.num_rows, 0.0);

    std::vector<double> col_sum(p.num_vertices, 0.0);
    const auto add = [&](std::size_t r, vertex_t j, double coef){
        const double a = std::fabs(coef);
        col_sum[j] += std::pow(a, 2.0 - alpha);
        s.sigma[r] += std::pow(a, alpha);
    };
    for (std::size_t e = 0; e < k.num_edge_rows; e++){
        add(e, k.row_edges[e].u, k.row_coef[e]);
        add(e, k.row_edges[e].v, -k.row_coef[e]);
    }
    for (std::size_t i = 0; i < k.row_vertices.size(); i++){
        add(k.num_edge_rows + i, k.row_vertices[i],
            k.row_coef[k.num_edge_rows + i]);
    }
    for (std::size_t r = 0; r < k.num_rows; r++){
        s.sigma[r] = 1.0/s.sigma[r]; // rows carry a positive coefficient
    }
    for (std::size_t j = 0; j < p.num_vertices; j++){
        if (col_sum[j] > 0.0){
            s.tau[j] = 1.0/col_sum[j];
        }else if (p.lam_l2[j] > 0.0){
            s.tau[j] = 1.0/p.lam_l2[j]; // vertex untouched by K
        }else{
            throw ValidationError("ppd_precond: vertex " + std::to_string(j)
                + " is touched by no row and has no fidelity fallback");
        }
    }
    return s;
}

PpdSolver::PpdSolver(const GraphProblem& p, const SolverConfig& cfg)
    : p_(p), cfg_(cfg), k_(build_k(p)), steps_(ppd_precond(p, k_))
{
    cfg_.threads = resolve_threads(cfg_.threads);
    if (!(cfg_.tol >= 0.0)){ throw ConfigError("tol must be >= 0"); }
    x_ = p_.y;
    x_prev_.assign(p_.num_vertices, 0.0);
    xbar_ = x_;
    d_.assign(k_.num_rows, 0.0);
}

void PpdSolver::step()
{
    const std::int64_t nR = (std::int64_t) k_.num_rows;
    const std::int64_t nEr = (std::int64_t) k_.num_edge_rows;
    const std::int64_t V = p_.num_vertices;
    const int threads = cfg_.threads;
    std::int64_t bad = 0;

    #pragma omp parallel num_threads(threads) if(threads > 1) \
        reduction(+:bad)
    {
        /* dual ascent with K applied inline; the prox of the conjugate of
         * |.| is the projection on [-1, 1] */
        #pragma omp for schedule(static)
        for (std::int64_t r = 0; r < nR; r++){
            const double kx = r < nEr
                ? k_.row_coef[r]*(xbar_[k_.row_edges[r].u]
                    - xbar_[k_.row_edges[r].v])
                : k_.row_coef[r]*xbar_[k_.row_vertices[r - nEr]];
            const double dr = d_[r] + steps_.sigma[r]*kx;
            d_[r] = dr > 1.0 ? 1.0 : dr < -1.0 ? -1.0 : dr;
        }
        /* primal descent, closed-form prox of the quadratic part, then
         * extrapolation with factor 1 */
        #pragma omp for schedule(static)
        for (std::int64_t v = 0; v < V; v++){
            double ktd = 0.0;
            for (std::uint32_t a = k_.col_start[v]; a < k_.col_start[v + 1];
                a++){
                const std::uint32_t r = k_.cols[a] >> 1;
                ktd += (k_.cols[a] & 1u ? -k_.row_coef[r] : k_.row_coef[r])
                    *d_[r];
            }
            const double tl = steps_.tau[v]*p_.lam_l2[v];
            const double xn = (x_[v] - steps_.tau[v]*ktd + tl*p_.y[v])
                /(1.0 + tl);
            x_prev_[v] = x_[v];
            xbar_[v] = 2.0*xn - x_[v];
            x_[v] = xn;
            bad += std::isfinite(xn) ? 0 : 1;
        }
    }
    iter_++;

    if (bad){
        throw NumericalError("non-finite iterate at iteration "
            + std::to_string(iter_));
    }
}

double PpdSolver::fixed_point_residual() const
{
    if (iter_ == 0){
        throw std::logic_error("fixed_point_residual: no iteration yet");
    }
    return det_rel_change(x_, x_prev_, cfg_.threads);
}

SolveResult PpdSolver::run()
{
    ConvergenceTrace trace;
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
        trace.records.push_back({k, obj, r,
            std::chrono::duration<double>(std::chrono::steady_clock::now()
                - t0).count(), false});
        if (r <= cfg_.tol){ break; }
    }
    return {x_, std::move(trace)};
}

SolveResult ppd_run(const GraphProblem& p, const SolverConfig& cfg)
{
    return PpdSolver(p, cfg).run();
}

} // namespace pgfb
