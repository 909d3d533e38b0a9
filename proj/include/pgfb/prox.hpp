/*=============================================================================
 * Closed-form proximity operators in scalar and diagonal metrics, the
 * backward steps of the splitting.
 *
 * prox^M_g(x) = argmin_y 1/2 ||x - y||_M^2 + g(y), M a diagonal strictly
 * positive metric. Exactly at a threshold the merge/zero branch is taken;
 * both branches coincide there, the tie-break only fixes the branch.
 *===========================================================================*/
#pragma once
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pgfb {

/* prox in metric m of lam |.| : soft-thresholding at lam/m */
double prox_abs_scaled(double x, double lam, double m);

/* prox in metric diag(m1, m2) of mu |x1 - x2|; merges both coordinates to
 * their metric-weighted mean when |x1 - x2| <= mu (1/m1 + 1/m2) */
std::pair<double, double> prox_pair_diff(double x1, double x2, double mu,
    double m1, double m2);

/* subspace spanned by a coordinate subset; with remove_mean set, its
 * intersection with the orthogonal complement of the constant direction
 * (deviation subspace), whose metric projector subtracts the metric-weighted
 * mean over the subset */
struct SubspaceDescriptor {
    std::vector<std::uint32_t> coords;
    bool remove_mean = false;
};

/* prox of x -> lam ||P_S^M x||_M in metric M; in place, touches only the
 * subset coordinates; metric empty means identity, else indexed by
 * coordinate over the full vector */
void prox_group_seminorm(std::span<double> x, double lam,
    const SubspaceDescriptor& s, std::span<const double> metric = {});

/* projection form for the group constraint ||P_S^M x||_M <= lam */
void prox_group_constraint(std::span<double> x, double lam,
    const SubspaceDescriptor& s, std::span<const double> metric = {});

} // namespace pgfb
