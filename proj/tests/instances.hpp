/*=============================================================================
 * Shared fixtures for the unit and acceptance suites.
 *===========================================================================*/
#pragma once
#include <vector>

#include "oracles.hpp"
#include "pgfb/graph_problem.hpp"
#include "pgfb/synth.hpp"

namespace fixtures {

using namespace pgfb;

/* y = (0, 4), unit fidelity, unit tv weight; optimum (1, 3) */
inline GraphProblem two_vertex()
{
    return make_problem(2, {{0, 1}}, {0.0, 4.0}, {1.0, 1.0}, {1.0},
        {0.0, 0.0});
}

/* chain on n vertices with positive fidelity everywhere */
inline GraphProblem random_chain(oracles::TestRng& rng, std::size_t n,
    bool with_l1)
{
    std::vector<Edge> edges;
    std::vector<double> y(n), l2(n), l1(n, 0.0), d1(n - 1);
    for (std::size_t v = 0; v + 1 < n; v++){
        edges.push_back({(vertex_t) v, (vertex_t) (v + 1)});
        d1[v] = rng.uniform(0.1, 1.0);
    }
    for (std::size_t v = 0; v < n; v++){
        y[v] = rng.uniform(-4.0, 4.0);
        l2[v] = rng.uniform(0.5, 2.0);
        if (with_l1 && rng.uniform() < 0.5){ l1[v] = rng.uniform(0.0, 0.3); }
    }
    return make_problem((vertex_t) n, std::move(edges), std::move(y),
        std::move(l2), std::move(d1), std::move(l1));
}

/* random connected-ish graph: spanning chain plus extra random edges; a
 * fraction of vertices loses fidelity and gets an l1 weight instead */
inline GraphProblem random_graph(oracles::TestRng& rng, std::size_t n)
{
    std::vector<Edge> edges;
    std::vector<double> d1;
    for (std::size_t v = 0; v + 1 < n; v++){
        edges.push_back({(vertex_t) v, (vertex_t) (v + 1)});
        d1.push_back(rng.uniform(0.05, 2.0));
    }
    const std::size_t extra = n/2;
    for (std::size_t k = 0; k < extra; k++){
        const vertex_t u = (vertex_t) rng.index(n);
        const vertex_t v = (vertex_t) rng.index(n);
        if (u == v){ continue; }
        const Edge e{std::min(u, v), std::max(u, v)};
        bool dup = false;
        for (const Edge& other : edges){
            if (other.u == e.u && other.v == e.v){ dup = true; break; }
        }
        if (dup){ continue; }
        edges.push_back(e);
        d1.push_back(rng.uniform(0.05, 2.0));
    }
    std::vector<double> y(n), l2(n), l1(n, 0.0);
    for (std::size_t v = 0; v < n; v++){
        const bool observed = rng.uniform() < 0.8;
        y[v] = observed ? rng.uniform(-5.0, 5.0) : 0.0;
        l2[v] = observed ? rng.uniform(0.2, 3.0) : 0.0;
        if (!observed || rng.uniform() < 0.3){
            l1[v] = rng.uniform(0.05, 0.8);
        }
    }
    return make_problem((vertex_t) n, std::move(edges), std::move(y),
        std::move(l2), std::move(d1), std::move(l1));
}

/* the 64x64 heterogeneous instance used by the trend criteria */
inline GraphProblem trend_grid()
{
    SynthConfig cfg;
    cfg.width = cfg.height = 64;
    cfg.seed = 20150708;
    cfg.noise = 0.5;
    cfg.pieces = 12;
    cfg.zero_frac = 0.15;
    cfg.tv_strength = 0.8;
    cfg.l1_strength = 0.4;
    cfg.hetero = 2.0;
    return synth_grid(cfg);
}

} // namespace fixtures
