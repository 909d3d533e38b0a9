/*=============================================================================
 * Plain serial transcription of the solver kernels, kept as the reference
 * against which the OpenMP implementation is validated: same per-coordinate
 * arithmetic and the same fixed block-summation convention, no pragmas, no
 * shared workspaces. The benchmark tool compares the two paths; the tests
 * assert bit-identical iterates.
 *===========================================================================*/
#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pgfb/graph_problem.hpp"
#include "pgfb/preconditioner.hpp"
#include "pgfb/solver.hpp"

namespace pgfb::reference {

/* objective with the library's block-summation convention, serial */
double objective(const GraphProblem& p, std::span<const double> x);

class Solver {
public:
    Solver(const GraphProblem& p, const SolverConfig& cfg);
    void step();
    const std::vector<double>& x() const { return x_; }
    const AuxiliaryVariables& aux() const { return z_; }

private:
    const GraphProblem& p_;
    SolverConfig cfg_;
    Preconditioner pc_;
    AuxiliaryVariables z_;
    bool store_residual_ = false;
    std::vector<vertex_t> res_support_;
    std::vector<std::uint32_t> v_plus_pos_, res_pos_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>
        incident_;
    std::vector<double> x_;
};

} // namespace pgfb::reference
