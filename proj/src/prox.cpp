#include "pgfb/prox.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pgfb {

namespace {

void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)){
        throw std::invalid_argument(std::string(what)
            + " must be a strictly positive real");
    }
}

} // namespace

double prox_abs_scaled(double x, double lam, double m)
{
    require_positive(lam, "lam");
    require_positive(m, "m");
    const double thr = lam/m;
    const double a = std::fabs(x);
    return a > thr ? (1.0 - thr/a)*x : 0.0;
}

std::pair<double, double> prox_pair_diff(double x1, double x2, double mu,
    double m1, double m2)
{
    require_positive(mu, "mu");
    require_positive(m1, "m1");
    require_positive(m2, "m2");
    const double w1 = m1/(m1 + m2), w2 = m2/(m1 + m2);
    const double xbar = w1*x1 + w2*x2;
    const double mubar = mu*(1.0/m1 + 1.0/m2);
    const double d = x1 - x2;
    const double ad = std::fabs(d);
    if (ad > mubar){
        const double shrink = 1.0 - mubar/ad;
        return {xbar + shrink*w2*d, xbar - shrink*w1*d};
    }
    return {xbar, xbar};
}

namespace {

/* shared body of the group prox/projection: scale is applied to the metric
 * projection of x onto S, the S-orthogonal part is kept */
void group_apply(std::span<double> x, double lam, const SubspaceDescriptor& s,
    std::span<const double> metric, bool constraint)
{
    require_positive(lam, "lam");
    if (s.coords.empty()){
        throw std::invalid_argument("group prox: empty coordinate subset");
    }
    if (!metric.empty() && metric.size() != x.size()){
        throw std::invalid_argument("group prox: metric length mismatch");
    }
    const auto m = [&](std::uint32_t j){
        return metric.empty() ? 1.0 : metric[j];
    };
    for (std::uint32_t j : s.coords){
        if (j >= x.size()){
            throw std::invalid_argument("group prox: coordinate out of "
                "range");
        }
        if (!metric.empty()){ require_positive(metric[j], "metric"); }
    }

    double wmean = 0.0;
    if (s.remove_mean){
        double wsum = 0.0, wx = 0.0;
        for (std::uint32_t j : s.coords){
            wsum += m(j);
            wx += m(j)*x[j];
        }
        wmean = wx/wsum;
    }

    double sq = 0.0;
    for (std::uint32_t j : s.coords){
        const double pj = x[j] - wmean;
        sq += m(j)*pj*pj;
    }
    const double norm = std::sqrt(sq);

    if (norm > lam){
        const double scale = constraint ? lam/norm : 1.0 - lam/norm;
        for (std::uint32_t j : s.coords){
            const double pj = x[j] - wmean;
            x[j] = (x[j] - pj) + scale*pj;
        }
    }else if (!constraint){
        for (std::uint32_t j : s.coords){ x[j] = wmean; }
    }
    /* constraint branch: feasible point left unchanged */
}

} // namespace

void prox_group_seminorm(std::span<double> x, double lam,
    const SubspaceDescriptor& s, std::span<const double> metric)
{
    group_apply(x, lam, s, metric, false);
}

void prox_group_constraint(std::span<double> x, double lam,
    const SubspaceDescriptor& s, std::span<const double> metric)
{
    group_apply(x, lam, s, metric, true);
}

} // namespace pgfb
