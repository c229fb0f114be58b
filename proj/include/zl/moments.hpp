#pragma once

// Window moments of S1 over [T, T+H] with H = T^(1/2+eps), the empirical
// window constant c_hat, and the second-moment calibration of |Z|.

#include <vector>

#include "zl/zeros.hpp"

namespace zl::moments {

struct MomentEstimate {
    double T = 0.0;
    double epsilon = 0.0;
    double H = 0.0;        // T^(1/2+epsilon)
    int l = 1;
    double integral = 0.0; // int_T^{T+H} S1(t)^{2l} dt
    double c_hat = 0.0;    // integral / H
};

// Adaptive quadrature of S1^(2l) over the window, split at ordinates,
// relative tolerance 1e-4.
MomentEstimate selberg_moment(double T, int l, double epsilon, const zeros::ZeroStore& store);

struct StabilityReport {
    std::vector<MomentEstimate> rows;
    double max_rel_spread = 0.0;  // max over pairs of |ci-cj| / mean(ci,cj)
};

StabilityReport moment_stability(const std::vector<double>& t_list, int l, double epsilon,
                                 const zeros::ZeroStore& store);

// (1 / (U ln T)) * int_T^{T+U} |Z(t)|^2 dt.
double hl_second_moment(double T, double U, const zeros::ZeroStore& store);

}  // namespace zl::moments
