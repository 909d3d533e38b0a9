#include "pgfb/graph_problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <utility>

#include "pgfb/parallel.hpp"

namespace pgfb {

namespace {

void require_len(std::size_t got, std::size_t want, const char* what)
{
    if (got != want){
        throw ValidationError(std::string(what) + ": expected "
            + std::to_string(want) + " entries, got " + std::to_string(got));
    }
}

void require_x(const GraphProblem& p, std::span<const double> x)
{
    if (x.size() != p.num_vertices){
        throw std::invalid_argument("x: expected "
            + std::to_string(p.num_vertices) + " coordinates, got "
            + std::to_string(x.size()));
    }
    if (any_nonfinite(x)){
        throw std::invalid_argument("x contains non-finite values");
    }
}

} // namespace

GraphProblem make_problem(vertex_t num_vertices, std::vector<Edge> edges,
    std::vector<double> y, std::vector<double> lam_l2,
    std::vector<double> lam_d1, std::vector<double> lam_l1,
    std::vector<double> mu, std::vector<double> nu)
{
    const std::size_t V = num_vertices, E = edges.size();
    require_len(y.size(), V, "y");
    require_len(lam_l2.size(), V, "lam_l2");
    require_len(lam_l1.size(), V, "lam_l1");
    require_len(lam_d1.size(), E, "lam_d1");
    if (!mu.empty()){ require_len(mu.size(), E, "mu"); }
    if (!nu.empty()){ require_len(nu.size(), V, "nu"); }

    for (std::size_t v = 0; v < V; v++){
        if (!std::isfinite(y[v])){
            throw ValidationError("vertex " + std::to_string(v)
                + ": non-finite observation");
        }
        if (!std::isfinite(lam_l2[v]) || lam_l2[v] < 0.0
            || !std::isfinite(lam_l1[v]) || lam_l1[v] < 0.0){
            throw ValidationError("vertex " + std::to_string(v)
                + ": fidelity and l1 weights must be finite and >= 0");
        }
        if (!nu.empty() && (!std::isfinite(nu[v]) || nu[v] < 0.0)){
            throw ValidationError("vertex " + std::to_string(v)
                + ": nu must be finite and >= 0");
        }
    }

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(E);
    for (std::size_t e = 0; e < E; e++){
        Edge& ed = edges[e];
        if (ed.u >= num_vertices || ed.v >= num_vertices){
            throw ValidationError("edge " + std::to_string(e)
                + ": endpoint out of range");
        }
        if (ed.u == ed.v){
            throw ValidationError("edge " + std::to_string(e)
                + ": self-loop");
        }
        if (ed.u > ed.v){ std::swap(ed.u, ed.v); }
        const std::uint64_t key =
            (std::uint64_t) ed.u*num_vertices + ed.v;
        if (!seen.insert(key).second){
            throw ValidationError("edge " + std::to_string(e)
                + ": duplicate undirected edge (" + std::to_string(ed.u)
                + ", " + std::to_string(ed.v) + ")");
        }
        if (!std::isfinite(lam_d1[e]) || lam_d1[e] < 0.0){
            throw ValidationError("edge " + std::to_string(e)
                + ": tv weight must be finite and >= 0");
        }
        if (!mu.empty() && (!std::isfinite(mu[e]) || mu[e] <= 0.0)){
            throw ValidationError("edge " + std::to_string(e)
                + ": mu must be finite and > 0");
        }
    }

    GraphProblem p;
    p.num_vertices = num_vertices;
    p.edges = std::move(edges);
    p.y = std::move(y);
    p.lam_l2 = std::move(lam_l2);
    p.lam_d1 = std::move(lam_d1);
    p.lam_l1 = std::move(lam_l1);
    p.mu = std::move(mu);
    p.nu = std::move(nu);

    std::vector<char> covered(V, 0);
    for (std::size_t e = 0; e < E; e++){
        if (p.lam_d1[e] > 0.0){
            p.active.e_plus.push_back((std::uint32_t) e);
            covered[p.edges[e].u] = 1;
            covered[p.edges[e].v] = 1;
        }
    }
    for (std::size_t v = 0; v < V; v++){
        if (p.lam_l1[v] > 0.0){
            p.active.v_plus.push_back((vertex_t) v);
            covered[v] = 1;
        }
        if (p.lam_l2[v] > 0.0){ covered[v] = 1; }
    }
    for (std::size_t v = 0; v < V; v++){
        if (!covered[v]){
            throw ValidationError("vertex " + std::to_string(v)
                + ": uncovered (no fidelity, no l1 weight, no incident edge "
                "with positive tv weight)");
        }
    }
    return p;
}

double objective_value(const GraphProblem& p, std::span<const double> x,
    int threads)
{
    if (x.size() != p.num_vertices){
        throw std::invalid_argument("x: expected "
            + std::to_string(p.num_vertices) + " coordinates, got "
            + std::to_string(x.size()));
    }
    /* three separate ascending block sums, one parallel region */
    const std::size_t nV = p.num_vertices, nE = p.edges.size();
    const std::size_t nvb = (nV + sum_block - 1)/sum_block;
    const std::size_t neb = nE ? (nE + sum_block - 1)/sum_block : 0;
    std::vector<double> pfid(nvb), pl1(nvb), ptv(neb);
    std::int64_t bad = 0;
    /* the block structure fixes the summation order, so the thread gate
     * cannot change the result */
    #pragma omp parallel num_threads(threads) \
        if(threads > 1 && nvb + neb >= 4) reduction(+:bad)
    {
        #pragma omp for schedule(static) nowait
        for (std::int64_t b = 0; b < (std::int64_t) nvb; b++){
            const std::size_t begin = (std::size_t) b*sum_block;
            const std::size_t end = begin + sum_block < nV
                ? begin + sum_block : nV;
            double fid = 0.0, l1 = 0.0;
            for (std::size_t v = begin; v < end; v++){
                bad += std::isfinite(x[v]) ? 0 : 1;
                const double d = x[v] - p.y[v];
                fid += p.lam_l2[v]*d*d;
                l1 += p.lam_l1[v]*std::fabs(x[v]);
            }
            pfid[(std::size_t) b] = fid;
            pl1[(std::size_t) b] = l1;
        }
        #pragma omp for schedule(static)
        for (std::int64_t b = 0; b < (std::int64_t) neb; b++){
            const std::size_t begin = (std::size_t) b*sum_block;
            const std::size_t end = begin + sum_block < nE
                ? begin + sum_block : nE;
            double tv = 0.0;
            for (std::size_t e = begin; e < end; e++){
                tv += p.lam_d1[e]
                    *std::fabs(x[p.edges[e].u] - x[p.edges[e].v]);
            }
            ptv[(std::size_t) b] = tv;
        }
    }
    if (bad){
        throw std::invalid_argument("x contains non-finite values");
    }
    double fid = 0.0, tv = 0.0, l1 = 0.0;
    for (std::size_t b = 0; b < nvb; b++){
        fid += pfid[b];
        l1 += pl1[b];
    }
    for (std::size_t b = 0; b < neb; b++){ tv += ptv[b]; }
    return 0.5*fid + tv + l1;
}

void grad_f(const GraphProblem& p, std::span<const double> x,
    std::span<double> g, int threads)
{
    if (x.size() != p.num_vertices || g.size() != p.num_vertices){
        throw std::invalid_argument("grad_f: dimension mismatch");
    }
    const std::int64_t V = p.num_vertices;
    #pragma omp parallel for schedule(static) num_threads(threads) \
        if(threads > 1)
    for (std::int64_t v = 0; v < V; v++){
        g[v] = p.lam_l2[v]*(x[v] - p.y[v]);
    }
}

std::vector<double> grad_f(const GraphProblem& p, std::span<const double> x,
    int threads)
{
    std::vector<double> g(p.num_vertices);
    grad_f(p, x, g, threads);
    return g;
}

DiagonalMetric lipschitz_metric(const GraphProblem& p, double fallback)
{
    if (!(fallback > 0.0) || !std::isfinite(fallback)){
        throw std::invalid_argument("lipschitz_metric: fallback must be a "
            "strictly positive real");
    }
    DiagonalMetric L;
    L.coeffs.resize(p.num_vertices);
    for (std::size_t v = 0; v < p.num_vertices; v++){
        L.coeffs[v] = p.lam_l2[v] > 0.0 ? p.lam_l2[v] : fallback;
    }
    return L;
}

double default_lipschitz_fallback(const GraphProblem& p)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t v = 0; v < p.num_vertices; v++){
        if (p.lam_l2[v] > 0.0){ sum += p.lam_l2[v]; n++; }
    }
    return n ? sum/(double) n : 1.0;
}

double default_zero_tol(const GraphProblem& p)
{
    double m = 0.0;
    for (std::size_t v = 0; v < p.num_vertices; v++){
        m = std::max(m, std::fabs(p.y[v]));
    }
    return 1e-9*(m + 1.0);
}

double compression_ratio(const GraphProblem& p, std::span<const double> x,
    double zero_tol)
{
    if (!p.has_mu()){
        throw ValidationError("compression_ratio: mu is not available");
    }
    if (!(zero_tol >= 0.0)){
        throw std::invalid_argument("compression_ratio: zero_tol must be "
            ">= 0");
    }
    require_x(p, x);
    double num = 0.0, den = 0.0;
    for (std::size_t e = 0; e < p.edges.size(); e++){
        const auto [u, v] = p.edges[e];
        if (std::fabs(p.y[u] - p.y[v]) > zero_tol){ num += p.mu[e]; }
        if (std::fabs(x[u] - x[v]) > zero_tol){ den += p.mu[e]; }
    }
    if (den == 0.0){ return std::numeric_limits<double>::infinity(); }
    return num/den;
}

double relative_error(const GraphProblem& p, std::span<const double> x)
{
    if (!p.has_nu()){
        throw ValidationError("relative_error: nu is not available");
    }
    require_x(p, x);
    const std::size_t V = p.num_vertices;
    double wsum = 0.0, wy = 0.0;
    for (std::size_t v = 0; v < V; v++){
        wsum += p.nu[v];
        wy += p.nu[v]*p.y[v];
    }
    if (!(wsum > 0.0)){
        throw ValidationError("relative_error: total nu weight is zero");
    }
    const double ybar = wy/wsum;
    double num = 0.0, den = 0.0;
    for (std::size_t v = 0; v < V; v++){
        const double dx = x[v] - p.y[v], dy = p.y[v] - ybar;
        num += p.nu[v]*dx*dx;
        den += p.nu[v]*dy*dy;
    }
    if (den == 0.0){
        throw ValidationError("relative_error: y is constant on the support "
            "of nu");
    }
    return std::sqrt(num)/std::sqrt(den);
}

} // namespace pgfb
