/*=============================================================================
 * Text formats.
 *
 * Vertex file: header "vertex y lam_l2 lam_l1 nu" (nu column optional), then
 * one space-separated row per vertex with ids 0..|V|-1 in order. Edge file:
 * header "u v lam_d1 mu" (mu optional), one row per edge. Decimal reals with
 * '.' separator, scientific notation accepted.
 *
 * Solution file: one real per line, vertex order. Trace file: CSV with
 * header "iter,objective,rel_change,seconds,recond", '.' decimals, '\n' line
 * endings. Reals are written with 17 significant digits so identical runs
 * give byte-identical files.
 *===========================================================================*/
#pragma once
#include <filesystem>
#include <span>
#include <vector>

#include "pgfb/graph_problem.hpp"
#include "pgfb/solver.hpp"

namespace pgfb {

GraphProblem load_problem(const std::filesystem::path& vertex_file,
    const std::filesystem::path& edge_file);

void write_problem(const std::filesystem::path& vertex_file,
    const std::filesystem::path& edge_file, const GraphProblem& p);

void write_solution(const std::filesystem::path& file,
    std::span<const double> x);
std::vector<double> read_solution(const std::filesystem::path& file);

void write_trace_csv(const std::filesystem::path& file,
    const ConvergenceTrace& trace);
ConvergenceTrace read_trace_csv(const std::filesystem::path& file);

} // namespace pgfb
