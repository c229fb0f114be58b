#pragma once

// The argument function S(t), its antiderivative S1(T), odd-order roots of
// S1, the reduced integral between a root and a chosen height, and mean
// values of arg zeta over intervals.

#include <cstddef>
#include <utility>
#include <vector>

#include "zl/zeros.hpp"

namespace zl::argmod {

// S(t) = N(t) - theta(t)/pi - 1, half-sum convention at ordinates.
double S(double t, const zeros::ZeroStore& store);

// S1(T) = integral_0^T S = sum_{gamma<=T}(T-gamma) - T - (1/pi) int_0^T theta,
// evaluated in extended precision (the three terms cancel to O(1)).
double S1(double T, const zeros::ZeroStore& store);

struct RootList {
    std::vector<double> roots;                         // mu_n, strictly increasing
    std::vector<std::pair<double, double>> brackets;   // S1 changes sign across each
    double scanned_from = 0.0;
    double scanned_to = 0.0;
    double final_step = 0.0;                           // grid step after stabilization

    // Index of the last root strictly below t; npos when none.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t last_root_below(double t) const;
};

// All sign-change roots of S1 in [lo, hi], bisected to 1e-8; the scan step
// starts at h0 and is halved until the root count is stable twice, never
// settling above 1/32.  Completeness is relative to the final step; S1
// crosses zero in narrow excursions (the first, near t = 55104.6, is only
// ~0.09 wide), so the floor matters.
RootList find_mu_roots(double lo, double hi, const zeros::ZeroStore& store, double h0 = 1.0);

struct ReducedIntegral {
    double alpha0 = 0.0;
    std::size_t k_bar = 0;   // index into the root list
    double mu_kbar = 0.0;
    double value = 0.0;      // integral_{mu_kbar}^{alpha0} S dt
};

// Piecewise quadrature of S from the bracketing root up to alpha0; the
// result equals S1(alpha0) to quadrature tolerance.
ReducedIntegral reduce_integral(double alpha0, const RootList& roots,
                                const zeros::ZeroStore& store);

// Mean of arg zeta(1/2+it) over [a, b]: pi (S1(b) - S1(a)) / (b - a).
double mean_arg(double a, double b, const zeros::ZeroStore& store);

// sup over a log-spaced sample of |S1(t)| / ln t for t in [100, t_max].
double littlewood_profile(double t_max, const zeros::ZeroStore& store,
                          int samples_per_decade = 64);

}  // namespace zl::argmod
