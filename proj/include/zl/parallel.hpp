#pragma once

// Deterministic parallel kernels.  Work is split into chunks whose layout
// depends only on the problem size, partial results are combined in index
// order, so results are bit-identical for any thread count.  Each kernel
// has a serial twin executing the same chunk schedule; the benchmark tool
// compares the two.

#include <cmath>
#include <cstddef>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace zl::par {

inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#if defined(_OPENMP)
    if (n >= 1) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline constexpr std::size_t chunk_size = 1024;

// out[i] = f(i), evaluated in parallel.
template <class F>
void for_each_index(std::size_t n, F&& f) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        f(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

// Neumaier-compensated sum of a range of term values.
template <class F>
double sum_compensated(std::size_t lo, std::size_t hi, F&& term) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double x = term(i);
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

namespace detail {

template <class F>
std::vector<double> chunk_partials(std::size_t n, F&& term, bool parallel) {
    const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
    std::vector<double> partial(chunks, 0.0);
    auto run = [&](std::size_t c) {
        const std::size_t lo = c * chunk_size;
        const std::size_t hi = lo + chunk_size < n ? lo + chunk_size : n;
        partial[c] = sum_compensated(lo, hi, term);
    };
    if (parallel) {
        for_each_index(chunks, run);
    } else {
        for (std::size_t c = 0; c < chunks; ++c) run(c);
    }
    return partial;
}

}  // namespace detail

// Deterministic parallel reduction: fixed chunk layout, fixed combine order.
template <class F>
double sum_indexed(std::size_t n, F&& term) {
    auto partial = detail::chunk_partials(n, term, true);
    return sum_compensated(0, partial.size(), [&](std::size_t c) { return partial[c]; });
}

// Serial twin of sum_indexed: identical chunk schedule, bitwise-equal result.
template <class F>
double sum_indexed_serial(std::size_t n, F&& term) {
    auto partial = detail::chunk_partials(n, term, false);
    return sum_compensated(0, partial.size(), [&](std::size_t c) { return partial[c]; });
}

// Deterministic max over f(i); ties keep the smallest index.
template <class F>
double max_indexed(std::size_t n, F&& f) {
    std::vector<double> vals(n);
    for_each_index(n, [&](std::size_t i) { vals[i] = f(i); });
    double m = -HUGE_VAL;
    for (std::size_t i = 0; i < n; ++i)
        if (vals[i] > m) m = vals[i];
    return m;
}

}  // namespace zl::par
