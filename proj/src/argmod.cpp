#include "zl/argmod.hpp"

#include <algorithm>
#include <cmath>

#include "zl/parallel.hpp"
#include "zl/quad.hpp"
#include "zl/rs.hpp"

namespace zl::argmod {

namespace {

constexpr long double pi_ld = 3.14159265358979323846264338328L;

long double s1_ld(double T, const zeros::ZeroStore& store) {
    const std::size_t n = store.count_below(T);
    const long double hinge =
        static_cast<long double>(n) * static_cast<long double>(T) - store.ordinate_prefix(n);
    return hinge - static_cast<long double>(T) - rs::theta_integral(T) / pi_ld;
}

double bisect_s1(double a, double b, double fa, double fb, const zeros::ZeroStore& store,
                 double tol) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = static_cast<double>(s1_ld(m, store));
        if (fm == 0.0) return m;
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

struct ScanResult {
    std::vector<double> roots;
    std::vector<std::pair<double, double>> brackets;
};

ScanResult scan_s1_roots(double lo, double hi, double h, const zeros::ZeroStore& store) {
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1;
    std::vector<double> grid(n), vals(n);
    par::for_each_index(n, [&](std::size_t i) {
        const double t = std::min(hi, lo + h * static_cast<double>(i));
        grid[i] = t;
        vals[i] = static_cast<double>(s1_ld(t, store));
    });
    ScanResult out;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (grid[i + 1] <= grid[i]) continue;
        if ((vals[i] < 0.0) != (vals[i + 1] < 0.0) || vals[i] == 0.0) {
            out.brackets.emplace_back(grid[i], grid[i + 1]);
            out.roots.push_back(
                bisect_s1(grid[i], grid[i + 1], vals[i], vals[i + 1], store, 1e-8));
        }
    }
    return out;
}

}  // namespace

double S(double t, const zeros::ZeroStore& store) {
    if (!(t >= 0.0)) throw domain_error("S(t) requires t >= 0");
    return store.count_N(t) - rs::theta_at(t) / M_PI - 1.0;
}

double S1(double T, const zeros::ZeroStore& store) {
    if (!(T >= 0.0)) throw domain_error("S1(T) requires T >= 0");
    store.require_covers(T, "S1");
    return static_cast<double>(s1_ld(T, store));
}

std::size_t RootList::last_root_below(double t) const {
    const auto it = std::lower_bound(roots.begin(), roots.end(), t);
    if (it == roots.begin()) return npos;
    return static_cast<std::size_t>(it - roots.begin()) - 1;
}

RootList find_mu_roots(double lo, double hi, const zeros::ZeroStore& store, double h0) {
    if (!(lo >= 0.0) || !(lo < hi)) throw domain_error("root scan range is empty or inverted");
    store.require_covers(hi, "find_mu_roots");
    if (!(h0 > 0.0)) throw domain_error("scan step must be positive");

    // S1 crosses zero in narrow excursions (the narrowest observed is ~0.09
    // wide), so the step is floored below them before stability counts.
    constexpr double h_min = 1.0 / 32.0;
    double h = h0;
    ScanResult cur = scan_s1_roots(lo, hi, h, store);
    int stable = 0;
    for (int halving = 0; halving < 12 && (stable < 2 || h > h_min); ++halving) {
        h *= 0.5;
        ScanResult next = scan_s1_roots(lo, hi, h, store);
        if (next.roots.size() == cur.roots.size() && h <= h_min)
            ++stable;
        else
            stable = 0;
        cur = std::move(next);
    }
    RootList out;
    out.roots = std::move(cur.roots);
    out.brackets = std::move(cur.brackets);
    out.scanned_from = lo;
    out.scanned_to = hi;
    out.final_step = h;
    return out;
}

ReducedIntegral reduce_integral(double alpha0, const RootList& roots,
                                const zeros::ZeroStore& store) {
    store.require_covers(alpha0, "reduce_integral");
    const std::size_t k = roots.last_root_below(alpha0);
    if (k == RootList::npos)
        throw precondition_error("alpha0 is below every scanned root of S1");
    if (k + 1 >= roots.roots.size() || roots.roots[k + 1] <= alpha0)
        throw precondition_error("alpha0 is not bracketed by scanned roots of S1");
    const double mu = roots.roots[k];

    const double s1_alpha = static_cast<double>(s1_ld(alpha0, store));
    if (std::abs(s1_alpha) <= 1e-6)
        throw precondition_error("S1(alpha0) vanishes; alpha0 must avoid roots of S1");

    // integral of S over [mu, alpha0], split at ordinates; within a piece
    // the count is constant so the integrand is smooth.
    const auto ords = store.ordinates();
    std::vector<double> ends;
    ends.push_back(mu);
    for (double g : ords)
        if (g > mu && g < alpha0) ends.push_back(g);
    ends.push_back(alpha0);

    std::vector<double> pieces(ends.size() - 1);
    par::for_each_index(pieces.size(), [&](std::size_t i) {
        const double a = ends[i], b = ends[i + 1];
        const double count = static_cast<double>(store.count_below(0.5 * (a + b)));
        pieces[i] = quad::adaptive_simpson(
            [&](double t) { return count - rs::theta_at(t) / M_PI - 1.0; }, a, b,
            std::max(1e-13, 2e-9 * (b - a) / (alpha0 - mu)));
    });
    const double value =
        par::sum_compensated(0, pieces.size(), [&](std::size_t i) { return pieces[i]; });

    ReducedIntegral out;
    out.alpha0 = alpha0;
    out.k_bar = k;
    out.mu_kbar = mu;
    out.value = value;
    return out;
}

double mean_arg(double a, double b, const zeros::ZeroStore& store) {
    if (!(a >= 0.0) || !(a < b)) throw domain_error("mean_arg needs 0 <= a < b");
    store.require_covers(b, "mean_arg");
    const long double diff = s1_ld(b, store) - s1_ld(a, store);
    return static_cast<double>(pi_ld * diff / static_cast<long double>(b - a));
}

double littlewood_profile(double t_max, const zeros::ZeroStore& store, int samples_per_decade) {
    if (!(t_max > 100.0)) throw domain_error("littlewood_profile needs t_max > 100");
    store.require_covers(t_max, "littlewood_profile");
    const double decades = std::log10(t_max / 100.0);
    const std::size_t n =
        std::max<std::size_t>(2, static_cast<std::size_t>(decades * samples_per_decade) + 1);
    return par::max_indexed(n, [&](std::size_t i) {
        const double t =
            100.0 * std::pow(t_max / 100.0, static_cast<double>(i) / static_cast<double>(n - 1));
        return std::abs(static_cast<double>(s1_ld(t, store))) / std::log(t);
    });
}

}  // namespace zl::argmod
