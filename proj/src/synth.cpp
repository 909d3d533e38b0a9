#include "pgfb/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace pgfb {

namespace {

/* explicit transforms on top of mt19937_64 keep the streams portable */
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform() // [0, 1)
    {
        return (double) (gen() >> 11)*0x1.0p-53;
    }
    double symmetric() // (-1, 1)
    {
        return 2.0*uniform() - 1.0;
    }
    double normal() // Box-Muller
    {
        double u;
        do { u = uniform(); } while (u == 0.0);
        const double r = std::sqrt(-2.0*std::log(u));
        return r*std::cos(2.0*std::numbers::pi*uniform());
    }
};

} // namespace

GraphProblem synth_grid(const SynthConfig& cfg)
{
    const std::uint64_t W = cfg.width, H = cfg.height;
    if (W == 0 || H == 0 || W*H > 0x7fffffffu){
        throw ValidationError("synth_grid: invalid grid size");
    }
    if (cfg.pieces == 0){
        throw ValidationError("synth_grid: need at least one piece");
    }
    if (!(cfg.zero_frac >= 0.0) || cfg.zero_frac > 1.0){
        throw ValidationError("synth_grid: zero_frac must lie in [0, 1]");
    }
    const std::size_t V = (std::size_t) (W*H);
    Rng rng(cfg.seed);

    /* piecewise-constant ground truth: nearest of `pieces` seeded centers */
    std::vector<double> cx(cfg.pieces), cy(cfg.pieces), level(cfg.pieces);
    for (std::uint32_t c = 0; c < cfg.pieces; c++){
        cx[c] = rng.uniform()*(double) W;
        cy[c] = rng.uniform()*(double) H;
        level[c] = 10.0*rng.uniform();
    }
    std::vector<double> truth(V);
    for (std::size_t v = 0; v < V; v++){
        const double px = (double) (v%W) + 0.5, py = (double) (v/W) + 0.5;
        double best = 0.0;
        std::uint32_t arg = 0;
        for (std::uint32_t c = 0; c < cfg.pieces; c++){
            const double d = (px - cx[c])*(px - cx[c])
                + (py - cy[c])*(py - cy[c]);
            if (c == 0 || d < best){ best = d; arg = c; }
        }
        truth[v] = level[arg];
    }

    /* exact count of zero-fidelity vertices via a seeded shuffle */
    const std::size_t nzero =
        (std::size_t) std::floor(cfg.zero_frac*(double) V);
    std::vector<std::uint32_t> order(V);
    for (std::size_t v = 0; v < V; v++){ order[v] = (std::uint32_t) v; }
    for (std::size_t v = V; v > 1; v--){ // Fisher-Yates
        const std::size_t j = (std::size_t) (rng.uniform()*(double) v);
        std::swap(order[v - 1], order[j]);
    }
    std::vector<char> zero(V, 0);
    for (std::size_t i = 0; i < nzero; i++){ zero[order[i]] = 1; }

    std::vector<double> y(V), lam_l2(V), lam_l1(V), nu(V);
    for (std::size_t v = 0; v < V; v++){
        const double noise = cfg.noise*rng.normal();
        const double weight = std::exp(cfg.hetero*rng.symmetric());
        if (zero[v]){
            y[v] = 0.0; // unobserved by convention
            nu[v] = 0.0;
            lam_l2[v] = 0.0;
            lam_l1[v] = cfg.l1_strength;
        }else{
            y[v] = truth[v] + noise;
            nu[v] = weight;
            lam_l2[v] = nu[v];
            lam_l1[v] = 0.0;
        }
    }

    std::vector<Edge> edges;
    std::vector<double> lam_d1, mu;
    edges.reserve(2*V);
    for (std::size_t v = 0; v < V; v++){
        const std::uint64_t px = v%W, py = v/W;
        if (px + 1 < W){ edges.push_back({(vertex_t) v, (vertex_t) (v + 1)}); }
        if (py + 1 < H){ edges.push_back({(vertex_t) v, (vertex_t) (v + W)}); }
    }
    lam_d1.resize(edges.size());
    mu.assign(edges.size(), 1.0);
    for (std::size_t e = 0; e < edges.size(); e++){
        lam_d1[e] = cfg.tv_strength*std::exp(cfg.hetero*rng.symmetric());
    }

    return make_problem((vertex_t) V, std::move(edges), std::move(y),
        std::move(lam_l2), std::move(lam_d1), std::move(lam_l1),
        std::move(mu), std::move(nu));
}

} // namespace pgfb
