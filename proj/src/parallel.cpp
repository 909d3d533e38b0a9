#include "pgfb/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace pgfb {

int resolve_threads(int requested)
{
    if (requested > 0){ return requested; }
    if (const char* env = std::getenv("PGFB_NUM_THREADS")){
        const int n = std::atoi(env);
        if (n > 0){ return n; }
    }
    return 1;
}

double det_sum(std::span<const double> v, int threads)
{
    return det_sum(v.size(), threads, [&](std::size_t i){ return v[i]; });
}

double det_rel_change(std::span<const double> a, std::span<const double> b,
    int threads)
{
    const std::size_t n = a.size();
    const std::size_t nb = (n + sum_block - 1)/sum_block;
    std::vector<double> pdist(nb), pnorm(nb);
    #pragma omp parallel for schedule(static) num_threads(threads) \
        if(threads > 1 && nb > 1)
    for (std::int64_t blk = 0; blk < (std::int64_t) nb; blk++){
        const std::size_t begin = (std::size_t) blk*sum_block;
        const std::size_t end = begin + sum_block < n ? begin + sum_block
            : n;
        double dd = 0.0, nn = 0.0;
        for (std::size_t i = begin; i < end; i++){
            const double d = a[i] - b[i];
            dd += d*d;
            nn += b[i]*b[i];
        }
        pdist[(std::size_t) blk] = dd;
        pnorm[(std::size_t) blk] = nn;
    }
    double dist = 0.0, norm = 0.0;
    for (std::size_t blk = 0; blk < nb; blk++){
        dist += pdist[blk];
        norm += pnorm[blk];
    }
    return std::sqrt(dist)
        /std::max(std::sqrt(norm), std::numeric_limits<double>::min());
}

bool any_nonfinite(std::span<const double> v, int threads)
{
    /* a count is order-independent, hence thread-count independent */
    const double bad = det_sum(v.size(), threads,
        [&](std::size_t i){ return std::isfinite(v[i]) ? 0.0 : 1.0; });
    return bad != 0.0;
}

} // namespace pgfb
