/*=============================================================================
 * Synthetic benchmark instances: 4-connected grid graphs carrying a
 * piecewise-constant ground truth (nearest of a few seeded cell centers)
 * plus Gaussian noise, heterogeneous multiplicative spreads on the extensive
 * quantities and tv weights, and a chosen fraction of zero-extensive-quantity
 * vertices which lose their fidelity term and receive an l1 penalty instead.
 * Fully deterministic for a given seed.
 *===========================================================================*/
#pragma once
#include <cstdint>

#include "pgfb/graph_problem.hpp"

namespace pgfb {

struct SynthConfig {
    std::uint32_t width = 32;
    std::uint32_t height = 32;
    std::uint64_t seed = 0;
    double noise = 0.3;    // Gaussian noise level on the observations
    std::uint32_t pieces = 4; // number of constant cells in the ground truth
    double zero_frac = 0.0; // exact fraction of zero-fidelity vertices
    double tv_strength = 0.5;  // mean tv weight
    double l1_strength = 0.5;  // l1 weight on zero-fidelity vertices
    double hetero = 1.0;   // multiplicative spread exp(hetero * U(-1, 1))
};

GraphProblem synth_grid(const SynthConfig& cfg);

} // namespace pgfb
