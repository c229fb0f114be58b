#include "zl/moments.hpp"

#include <algorithm>
#include <cmath>

#include "zl/argmod.hpp"
#include "zl/parallel.hpp"
#include "zl/quad.hpp"
#include "zl/rs.hpp"

namespace zl::moments {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// Window split at ordinates: S1 has a corner at every zero of Z, and is
// analytic between them.
std::vector<double> window_pieces(double a, double b, const zeros::ZeroStore& store) {
    std::vector<double> ends;
    ends.push_back(a);
    for (double g : store.ordinates())
        if (g > a && g < b) ends.push_back(g);
    ends.push_back(b);
    return ends;
}

}  // namespace

MomentEstimate selberg_moment(double T, int l, double epsilon, const zeros::ZeroStore& store) {
    if (!(T >= 1e3)) throw precondition_error("selberg_moment requires T >= 1e3");
    if (l < 1 || l > 4) throw precondition_error("selberg_moment requires 1 <= l <= 4");
    if (!(epsilon > 0.0) || epsilon > 0.2)
        throw precondition_error("selberg_moment requires 0 < epsilon <= 0.2");
    const double H = std::pow(T, 0.5 + epsilon);
    store.require_covers(T + H, "selberg_moment");

    const std::vector<double> ends = window_pieces(T, T + H, store);
    const std::size_t np = ends.size() - 1;
    auto integrand = [&](double t) { return ipow(argmod::S1(t, store), 2 * l); };

    // rough pass fixes the absolute budget for the adaptive pass
    std::vector<double> rough(np);
    par::for_each_index(np, [&](std::size_t i) {
        rough[i] = quad::composite_simpson(integrand, ends[i], ends[i + 1], 8, false);
    });
    const double i_rough =
        std::abs(par::sum_compensated(0, np, [&](std::size_t i) { return rough[i]; }));

    std::vector<double> fine(np);
    par::for_each_index(np, [&](std::size_t i) {
        const double frac = (ends[i + 1] - ends[i]) / H;
        const double tol = 0.5e-4 * std::max(i_rough, 1e-12) * std::max(frac, 1e-9);
        fine[i] = quad::adaptive_simpson(integrand, ends[i], ends[i + 1], tol);
    });

    MomentEstimate est;
    est.T = T;
    est.epsilon = epsilon;
    est.H = H;
    est.l = l;
    est.integral = par::sum_compensated(0, np, [&](std::size_t i) { return fine[i]; });
    est.c_hat = est.integral / H;
    return est;
}

StabilityReport moment_stability(const std::vector<double>& t_list, int l, double epsilon,
                                 const zeros::ZeroStore& store) {
    StabilityReport rep;
    for (double T : t_list) rep.rows.push_back(selberg_moment(T, l, epsilon, store));
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        for (std::size_t j = i + 1; j < rep.rows.size(); ++j) {
            const double a = rep.rows[i].c_hat, b = rep.rows[j].c_hat;
            const double m = 0.5 * (a + b);
            if (m > 0.0) rep.max_rel_spread = std::max(rep.max_rel_spread, std::abs(a - b) / m);
        }
    return rep;
}

double hl_second_moment(double T, double U, const zeros::ZeroStore& store) {
    if (!(T >= 1e3)) throw precondition_error("hl_second_moment requires T >= 1e3");
    const double min_u = 100.0 * 2.0 * M_PI / std::log(T);
    if (!(U >= min_u))
        throw precondition_error("window too short: U must be at least " + std::to_string(min_u));
    store.require_covers(T + U, "hl_second_moment");

    auto z2 = [](double t) {
        const double z = rs::rs_Z(rs::CriticalT(t), rs::default_correction);
        return z * z;
    };
    // ~12 nodes per mean zero gap, refined by doubling
    const double gap = 2.0 * M_PI / std::log(T / (2.0 * M_PI));
    const std::size_t n0 = static_cast<std::size_t>(12.0 * U / gap);
    const double integral = quad::refining_simpson(z2, T, T + U, n0, 1e-4, 3);
    return integral / (U * std::log(T));
}

}  // namespace zl::moments
