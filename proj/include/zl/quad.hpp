#pragma once

// Quadrature building blocks: recursive adaptive Simpson for smooth pieces,
// plus a deterministic composite rule whose node sums go through the
// fixed-order parallel reduction.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "zl/parallel.hpp"

namespace zl::quad {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance on a smooth integrand.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

// Adaptive Simpson over [a, b] split at the given interior points
// (integrand may have kinks there).  Tolerance is distributed by length.
template <class F>
double adaptive_simpson_split(F&& f, double a, double b, const std::vector<double>& splits,
                              double abs_tol, int max_depth = 40) {
    std::vector<double> ends;
    ends.reserve(splits.size() + 2);
    ends.push_back(a);
    for (double s : splits)
        if (s > a && s < b) ends.push_back(s);
    ends.push_back(b);
    const double span = b - a;
    double total = 0.0, comp = 0.0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double frac = (ends[i + 1] - ends[i]) / span;
        const double piece =
            adaptive_simpson(f, ends[i], ends[i + 1], abs_tol * (frac > 1e-12 ? frac : 1e-12),
                             max_depth);
        const double t = total + piece;
        if (std::abs(total) >= std::abs(piece))
            comp += (total - t) + piece;
        else
            comp += (piece - t) + total;
        total = t;
    }
    return total + comp;
}

// Composite Simpson with n panels (n even), nodes evaluated in parallel,
// weighted sum in fixed order.
template <class F>
double composite_simpson(F&& f, double a, double b, std::size_t n, bool parallel = true) {
    if (n < 2) n = 2;
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    std::vector<double> vals(n + 1);
    auto eval = [&](std::size_t i) { vals[i] = f(a + h * static_cast<double>(i)); };
    if (parallel)
        par::for_each_index(n + 1, eval);
    else
        for (std::size_t i = 0; i <= n; ++i) eval(i);
    const double s = par::sum_compensated(0, n + 1, [&](std::size_t i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        return w * vals[i];
    });
    return s * h / 3.0;
}

// Composite Simpson refined by doubling until the relative change is below
// rel_tol (or max_doublings is hit).  Deterministic.
template <class F>
double refining_simpson(F&& f, double a, double b, std::size_t n0, double rel_tol,
                        int max_doublings = 4, bool parallel = true) {
    double prev = composite_simpson(f, a, b, n0, parallel);
    for (int d = 0; d < max_doublings; ++d) {
        n0 *= 2;
        const double next = composite_simpson(f, a, b, n0, parallel);
        const double scale = std::abs(next) > 1e-300 ? std::abs(next) : 1.0;
        if (std::abs(next - prev) <= rel_tol * scale) return next;
        prev = next;
    }
    return prev;
}

}  // namespace zl::quad
