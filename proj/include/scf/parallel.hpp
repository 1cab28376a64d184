#ifndef SCF_PARALLEL_HPP
#define SCF_PARALLEL_HPP

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scf::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Parallel loop over [0, n). Bodies must be independent; results that feed a
// floating-point reduction are written to per-index slots and summed serially
// by the caller so totals stay bit-identical to the serial path.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
#else
    for (int i = 0; i < n; ++i) fn(i);
#endif
}

template <class Fn>
void serial_for(int n, Fn&& fn) {
    for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace scf::par

#endif
