/*=============================================================================
 * Independent oracles used by the unit and acceptance suites. Everything here
 * is deliberately written from the defining formulas, without reusing the
 * library's computational paths.
 *===========================================================================*/
#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "pgfb/graph_problem.hpp"

namespace oracles {

/* deterministic uniform/normal draws on top of mt19937_64 */
struct TestRng {
    std::mt19937_64 gen;
    explicit TestRng(std::uint64_t seed) : gen(seed) {}
    double uniform() { return (double) (gen() >> 11)*0x1.0p-53; }
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo)*uniform();
    }
    std::size_t index(std::size_t n)
    {
        return (std::size_t) (uniform()*(double) n);
    }
    double normal()
    {
        double u;
        do { u = uniform(); } while (u == 0.0);
        return std::sqrt(-2.0*std::log(u))
            *std::cos(6.283185307179586*uniform());
    }
};

/* golden-section search on a convex function over [lo, hi] */
template <typename F>
double golden_min(F&& f, double lo, double hi, double xtol)
{
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi*(b - a), d = a + invphi*(b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol){
        if (fc < fd){
            b = d; d = c; fd = fc;
            c = b - invphi*(b - a);
            fc = f(c);
        }else{
            a = c; c = d; fc = fd;
            d = a + invphi*(b - a);
            fd = f(d);
        }
    }
    return 0.5*(a + b);
}

/* argmin of 1/2 ||x - y||_M^2 + f(y) for dim <= 3 by coarse grid search over
 * a box centered at x of half-width 2 max|x_i| + 10, followed by shrinking
 * local grids (dim >= 2) or golden-section (dim 1) to absolute tolerance
 * 1e-9; f must be convex (templated so the grid loops inline f) */
template <typename F>
std::vector<double> oracle_prox(F&& f, std::span<const double> x,
    std::span<const double> metric)
{
    const std::size_t dim = x.size();
    if (dim == 0 || dim > 3){
        throw std::invalid_argument("oracle_prox: dimension must be 1..3");
    }
    const auto metric_term = [&](std::span<const double> y){
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); i++){
            const double m = metric.empty() ? 1.0 : metric[i];
            s += 0.5*m*(x[i] - y[i])*(x[i] - y[i]);
        }
        return s;
    };
    const auto value = [&](std::span<const double> y){
        return metric_term(y) + f(y);
    };
    double amp = 0.0;
    for (double v : x){ amp = std::max(amp, std::fabs(v)); }
    const double halfwidth = 2.0*amp + 10.0;

    if (dim == 1){
        const std::size_t n = 2001;
        double best = std::numeric_limits<double>::infinity();
        double arg = x[0];
        for (std::size_t i = 0; i < n; i++){
            const double y = x[0] - halfwidth
                + 2.0*halfwidth*(double) i/(double) (n - 1);
            const double v = value(std::span(&y, 1));
            if (v < best){ best = v; arg = y; }
        }
        const double h = 2.0*halfwidth/(double) (n - 1);
        const auto f1 = [&](double y){ return value(std::span(&y, 1)); };
        return {golden_min(f1, arg - h, arg + h, 1e-9)};
    }

    /* coarse pass, then shrinking local grids re-centered on the running
     * argmin; a hit on the box boundary re-centers without shrinking */
    const std::size_t coarse = dim == 2 ? 2001 : 101;
    std::vector<double> arg(x.begin(), x.end());
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> y(dim);
    if (dim == 2){
        /* scalar inner loop with the row term hoisted */
        const double m0 = metric.empty() ? 1.0 : metric[0];
        const double m1 = metric.empty() ? 1.0 : metric[1];
        double yy[2];
        for (std::size_t i = 0; i < coarse; i++){
            yy[0] = x[0] - halfwidth
                + 2.0*halfwidth*(double) i/(double) (coarse - 1);
            const double row = 0.5*m0*(x[0] - yy[0])*(x[0] - yy[0]);
            double rbest = std::numeric_limits<double>::infinity();
            double rarg = x[1];
            for (std::size_t j = 0; j < coarse; j++){
                yy[1] = x[1] - halfwidth
                    + 2.0*halfwidth*(double) j/(double) (coarse - 1);
                const double v = row
                    + 0.5*m1*(x[1] - yy[1])*(x[1] - yy[1])
                    + f(std::span<const double>(yy, 2));
                if (v < rbest){ rbest = v; rarg = yy[1]; }
            }
            if (rbest < best){ best = rbest; arg[0] = yy[0]; arg[1] = rarg; }
        }
    }else{
        for (std::size_t i = 0; i < coarse; i++){
            y[0] = x[0] - halfwidth
                + 2.0*halfwidth*(double) i/(double) (coarse - 1);
            for (std::size_t j = 0; j < coarse; j++){
                y[1] = x[1] - halfwidth
                    + 2.0*halfwidth*(double) j/(double) (coarse - 1);
                for (std::size_t l = 0; l < coarse; l++){
                    y[2] = x[2] - halfwidth
                        + 2.0*halfwidth*(double) l/(double) (coarse - 1);
                    const double v = value(y);
                    if (v < best){ best = v; arg = y; }
                }
            }
        }
    }

    double spacing = 2.0*halfwidth/(double) (coarse - 1);
    const std::size_t npts = 25; // per axis per refinement round
    int stall_guard = 200;
    while (spacing > 2.5e-10 && stall_guard-- > 0){
        const double hw = 6.0*spacing;
        const std::vector<double> center = arg;
        bool on_boundary = false;
        std::vector<std::size_t> idx(dim, 0);
        while (true){
            for (std::size_t k = 0; k < dim; k++){
                y[k] = center[k] - hw
                    + 2.0*hw*(double) idx[k]/(double) (npts - 1);
            }
            const double v = value(y);
            if (v < best){
                best = v;
                arg = y;
                on_boundary = false;
                for (std::size_t k = 0; k < dim; k++){
                    if (idx[k] == 0 || idx[k] == npts - 1){
                        on_boundary = true;
                    }
                }
            }
            std::size_t k = 0;
            while (k < dim && ++idx[k] == npts){ idx[k] = 0; k++; }
            if (k == dim){ break; }
        }
        if (!on_boundary){ spacing = 2.0*hw/(double) (npts - 1); }
    }
    return arg;
}

/* metric projection onto { ||y||_M <= lam } in R^2 by dense sweep of the
 * boundary parameterization (lam cos t / sqrt(m0), lam sin t / sqrt(m1))
 * plus golden-section refinement of the angle; square grids stall on curved
 * kinks, so the constraint gets this dedicated oracle */
std::vector<double> oracle_project_ellipse_2d(std::span<const double> x,
    std::span<const double> metric, double lam);

/* independent of the library objective path: plain triple loop */
double naive_objective(const pgfb::GraphProblem& p,
    std::span<const double> x);

/* central finite difference of a scalar function */
double central_diff(const std::function<double(double)>& f, double t,
    double h);

/* exact minimizer of the fused-lasso objective on a chain graph (vertices
 * 0..n-1, edges (i, i+1)), by enumeration of breakpoint/zero patterns with
 * per-pattern closed-form solves and subgradient certification; requires
 * lam_l2 > 0 on every vertex and n <= 14 */
struct ChainOptimum {
    std::vector<double> x;
    double objective;
};
ChainOptimum chain_optimum(const pgfb::GraphProblem& p);

/* plain subgradient descent on F, diminishing steps, best point kept */
std::vector<double> subgradient_descent(const pgfb::GraphProblem& p,
    std::size_t iters, double step0);

/* literal transcription of the scalar-metric iteration: full-space auxiliary
 * copies, step gamma, weights 1/n, resolvents written inline from their
 * closed forms; returns the iterate after each of `iters` iterations */
std::vector<std::vector<double>> gfb_literal_iterates(
    const pgfb::GraphProblem& p, double gamma, double rho,
    std::size_t iters);

} // namespace oracles
