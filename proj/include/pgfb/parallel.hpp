/*=============================================================================
 * OpenMP helpers and deterministic reductions.
 *
 * Every sum in the library is accumulated over fixed-size blocks of ascending
 * indices; block partials are then added in ascending block order. The result
 * is a fixed summation order, independent of the number of threads, so that
 * two runs with identical inputs produce bit-identical iterates whatever the
 * parallel configuration.
 *===========================================================================*/
#pragma once
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace pgfb {

/* resolve a thread count: positive request is taken as is, otherwise the
 * PGFB_NUM_THREADS environment variable, otherwise 1 */
int resolve_threads(int requested = 0);

/* below this block size a sum is a plain ascending-index loop */
inline constexpr std::size_t sum_block = 4096;

template <typename F>
double det_sum(std::size_t n, int threads, F&& term)
{
    if (n == 0){ return 0.0; }
    const std::size_t nblocks = (n + sum_block - 1)/sum_block;
    if (nblocks == 1){
        double s = 0.0;
        for (std::size_t i = 0; i < n; i++){ s += term(i); }
        return s;
    }
    std::vector<double> partial(nblocks);
    #pragma omp parallel for schedule(static) num_threads(threads) \
        if(threads > 1)
    for (std::int64_t b = 0; b < (std::int64_t) nblocks; b++){
        const std::size_t begin = (std::size_t) b*sum_block;
        const std::size_t end = begin + sum_block < n ? begin + sum_block : n;
        double s = 0.0;
        for (std::size_t i = begin; i < end; i++){ s += term(i); }
        partial[(std::size_t) b] = s;
    }
    double s = 0.0;
    for (std::size_t b = 0; b < nblocks; b++){ s += partial[b]; }
    return s;
}

double det_sum(std::span<const double> v, int threads = 1);

/* ||a - b|| / max(||b||, tiny), both block sums in one parallel region */
double det_rel_change(std::span<const double> a, std::span<const double> b,
    int threads = 1);

/* true if any coordinate is NaN or infinite */
bool any_nonfinite(std::span<const double> v, int threads = 1);

} // namespace pgfb
