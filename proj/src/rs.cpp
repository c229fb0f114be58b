#include "zl/rs.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "zl/parallel.hpp"
#include "zl/quad.hpp"

namespace zl::rs {

namespace {

constexpr long double pi_l = 3.14159265358979323846264338328L;
constexpr long double two_pi_l = 6.28318530717958647692528676656L;
constexpr double two_pi = 6.283185307179586476925287;

// ---------------------------------------------------------------------------
// theta(t) = -(t/2) ln pi + Im ln Gamma(1/4 + i t/2)
// ---------------------------------------------------------------------------

// Stirling series coefficients B_2k / (2k (2k-1)).
constexpr long double stirling_coef[8] = {
    1.0L / 12.0L,         -1.0L / 360.0L,       1.0L / 1260.0L,  -1.0L / 1680.0L,
    1.0L / 1188.0L,       -691.0L / 360360.0L,  1.0L / 156.0L,   -3617.0L / 122400.0L,
};

// Im ln Gamma(1/4 + i t/2) via recurrence shift into |z| >= 16 and the
// Stirling series.  Canonical branch, continuous in t.
long double im_log_gamma_quarter(long double t) {
    std::complex<long double> z(0.25L, 0.5L * t);
    long double shifted_im = 0.0L;
    while (std::abs(z) < 16.0L) {
        shifted_im += std::arg(z);
        z += 1.0L;
    }
    const std::complex<long double> lz = std::log(z);
    std::complex<long double> sum = (z - 0.5L) * lz - z;
    const std::complex<long double> inv2 = 1.0L / (z * z);
    std::complex<long double> zpow = 1.0L / z;
    for (const long double a : stirling_coef) {
        sum += a * zpow;
        zpow *= inv2;
    }
    return sum.imag() - shifted_im;
}

constexpr double theta_cutoff = 32.0;

long double theta_asym_l(long double t) {
    const long double u = t * 0.5L;
    const long double t2 = t * t;
    return u * (std::log(t / two_pi_l) - 1.0L) - pi_l / 8.0L + 1.0L / (48.0L * t) +
           7.0L / (5760.0L * t * t2) + 31.0L / (80640.0L * t * t2 * t2);
}

long double theta_l(long double t) {
    if (t >= theta_cutoff) return theta_asym_l(t);
    return im_log_gamma_quarter(t) - 0.5L * t * std::log(pi_l);
}

// ---------------------------------------------------------------------------
// integral_0^T theta
// ---------------------------------------------------------------------------

constexpr double theta_integral_cutoff = 64.0;

// Additive constant of the antiderivative of the theta series; frozen from
// a 40-digit quadrature of theta over [0, 64] (tools/gen_fixtures.py),
// stable to ~7e-16 across anchor heights.
constexpr long double theta_integral_const = 0.1935285050121892120578916L;

long double theta_antiderivative(long double T) {
    const long double T2 = T * T;
    return T2 / 4.0L * std::log(T / two_pi_l) - 3.0L * T2 / 8.0L - pi_l * T / 8.0L +
           std::log(T) / 48.0L - 7.0L / (11520.0L * T2) - 31.0L / (322560.0L * T2 * T2) +
           theta_integral_const;
}

// ---------------------------------------------------------------------------
// Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) and derivatives.
// Removable singularities at p = 1/4, 3/4 are crossed on a Taylor series;
// elsewhere the closed expressions (machine-derived, cross-checked against
// the series in tests) are used.
// ---------------------------------------------------------------------------

constexpr int taylor_len = 40;
constexpr double psi_taylor[taylor_len] = {
    0.5, -1.0,
    2.46740110027233965471, -1.64493406684822643647,
    0.277175914952561926628, 4.68567060839841391074,
    -7.97903106693623899402, 8.85213015451651170696,
    -4.85325679332073449056, -2.51789229892945213514,
    8.23707891402171573822, -10.392950799313194015,
    6.96129881434856656212, -1.28139302719682053351,
    -3.67951772606043084769, 5.62806548577837551845,
    -4.3546874075251171191, 1.70753293651690662848,
    0.691475486872550390614, -1.73962318567190363025,
    1.54336144296479531439, -0.762134384468315504436,
    0.024216716835194598669, 0.335534944451763552436,
    -0.352201674655132159567, 0.199463025408889004175,
    -0.0428552844287839413668, -0.0409912301270267032039,
    0.0557766726687188888129, -0.0354109146438710337419,
    0.0112596019657067811902, 0.00278078050641241757884,
    -0.00641630291564810370916, 0.00458326373696670442463,
    -0.0017790232674735115773, 0.000012313691768784610108,
    0.0005495875089035555413, -0.000452184096500777654247,
    0.000200837779258129989259, -0.0000279454400367210975403,
};

double psi_series(double u, int k) {
    double acc = 0.0;
    for (int i = taylor_len - 1; i >= k; --i) {
        double fall = 1.0;
        for (int j = 0; j < k; ++j) fall *= static_cast<double>(i - j);
        acc = acc * u + psi_taylor[i] * fall;
    }
    return acc;
}

double psi_direct_0(double p) {
    return std::cos(2.0 * M_PI * (p * p - p - 0.0625)) / std::cos(2.0 * M_PI * p);
}

double psi_direct_2(double p) {
    using std::cos;
    using std::pow;
    using std::sin;
    const double x0 = 2 * p;
    const double x1 = M_PI * x0;
    const double x2 = cos(x1);
    const double x3 = x0 - 1;
    const double x4 = sin(x1);
    const double x5 = M_PI * (-2 * pow(p, 2) + x0 + 1.0 / 8.0);
    const double x6 = sin(x5);
    const double x7 = pow(x2, 2);
    const double x8 = M_PI * cos(x5);
    return 4 * M_PI *
           (2 * M_PI * x2 * x3 * x4 * x6 - x7 * (pow(x3, 2) * x8 - x6) +
            x8 * (2 * pow(x4, 2) + x7)) /
           pow(x2, 3);
}

double psi_direct_3(double p) {
    using std::cos;
    using std::pow;
    using std::sin;
    const double x0 = 2 * p;
    const double x1 = M_PI * x0;
    const double x2 = cos(x1);
    const double x3 = sin(x1);
    const double x4 = M_PI * (-2 * pow(p, 2) + x0 + 1.0 / 8.0);
    const double x5 = cos(x4);
    const double x6 = sin(M_PI * p);
    const double x7 = x0 - 1;
    const double x8 = sin(x4);
    const double x9 = pow(x2, 2);
    const double x10 = M_PI * pow(x7, 2);
    return -8 * pow(M_PI, 2) *
           (pow(x2, 3) * x7 * (x10 * x8 + 3 * x5) -
            3 * M_PI * x2 * x7 * x8 * (2 * pow(x3, 2) + x9) -
            M_PI * x3 * x5 * (-4 * pow(x6, 4) + 4 * pow(x6, 2) + 5) +
            3 * x3 * x9 * (x10 * x5 - x8)) /
           pow(x2, 4);
}

double psi_direct_6(double p) {
    using std::cos;
    using std::pow;
    using std::sin;
    const double x0 = 2 * p;
    const double x1 = M_PI * (-2 * pow(p, 2) + x0 + 1.0 / 8.0);
    const double x2 = sin(x1);
    const double x3 = 15 * x2;
    const double x4 = cos(x1);
    const double x5 = x0 - 1;
    const double x6 = M_PI * pow(x5, 2);
    const double x7 = x4 * x6;
    const double x8 = pow(M_PI, 3);
    const double x9 = x4 * x8;
    const double x10 = pow(M_PI, 2);
    const double x11 = x10 * pow(x5, 4);
    const double x12 = M_PI * x0;
    const double x13 = cos(x12);
    const double x14 = sin(x12);
    const double x15 = pow(x14, 2) / pow(x13, 2);
    const double x16 = pow(x14, 4) / pow(x13, 4);
    const double x17 = 1.0 / x13;
    const double x18 = x17 * x8;
    const double x19 = 6 * x14 * x5;
    const double x20 = 3 * x4;
    const double x21 = x2 * x6;
    return -64 * x18 *
           (20 * x10 * x14 * x17 * x5 * (6 * x15 + 5) * (x20 + x21) +
            15 * x10 * (-x2 + x7) * (28 * x15 + 24 * x16 + 5) - x11 * x3 -
            M_PI * x17 * x19 * (x11 * x2 - x3 + 10 * x7) -
            x18 * x19 * x2 * (180 * x15 + 120 * x16 + 61) + x3 + pow(x5, 6) * x9 - 45 * x7 -
            x9 * (662 * x15 + 1320 * x16 + 61 + 720 * pow(x14, 6) / pow(x13, 6)) +
            15 * M_PI * (2 * x15 + 1) * (-x11 * x4 + x20 + 6 * x21));
}

constexpr double psi_series_halfwidth = 0.13;

double psi_deriv(double p, int k) {
    double sign = 1.0;
    if (p > 0.5) {
        p = 1.0 - p;
        if (k % 2) sign = -1.0;
    }
    const double u = p - 0.25;
    if (std::abs(u) <= psi_series_halfwidth) return sign * psi_series(u, k);
    switch (k) {
        case 0: return sign * psi_direct_0(p);
        case 2: return sign * psi_direct_2(p);
        case 3: return sign * psi_direct_3(p);
        case 6: return sign * psi_direct_6(p);
        default: return 0.0;
    }
}

// ---------------------------------------------------------------------------
// main sum tables
// ---------------------------------------------------------------------------

constexpr std::size_t table_len = 4096;

struct NTables {
    std::vector<double> log_n;
    std::vector<double> inv_sqrt_n;
};

const NTables& tables() {
    static const NTables t = [] {
        NTables tt;
        tt.log_n.resize(table_len + 1, 0.0);
        tt.inv_sqrt_n.resize(table_len + 1, 0.0);
        for (std::size_t n = 1; n <= table_len; ++n) {
            tt.log_n[n] = std::log(static_cast<double>(n));
            tt.inv_sqrt_n[n] = 1.0 / std::sqrt(static_cast<double>(n));
        }
        return tt;
    }();
    return t;
}

double main_sum(double t, double th, int N) {
    const NTables& tb = tables();
    double s = 0.0, comp = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double ln = static_cast<std::size_t>(n) <= table_len
                              ? tb.log_n[static_cast<std::size_t>(n)]
                              : std::log(static_cast<double>(n));
        const double is = static_cast<std::size_t>(n) <= table_len
                              ? tb.inv_sqrt_n[static_cast<std::size_t>(n)]
                              : 1.0 / std::sqrt(static_cast<double>(n));
        const double x = is * std::cos(th - t * ln);
        const double u = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - u) + x;
        else
            comp += (x - u) + s;
        s = u;
    }
    return 2.0 * (s + comp);
}

constexpr double z_exact_cutoff = 300.0;

// B_{2k} / (2k)! for the Euler-Maclaurin tail of the direct summation.
long double em_tail_coef(int k) {
    static constexpr long double coef[8] = {
        1.0L / 12.0L,
        -1.0L / 720.0L,
        1.0L / 30240.0L,
        -1.0L / 1209600.0L,
        1.0L / 47900160.0L,
        -691.0L / 1307674368000.0L,
        1.0L / 74724249600.0L,
        -3.38968029632258286e-13L,
    };
    return coef[k - 1];
}

// Direct Euler-Maclaurin evaluation of zeta(1/2+it), rotated by the phase.
double z_direct_at(double t) {
    using C = std::complex<long double>;
    const C s(0.5L, static_cast<long double>(t));
    const std::size_t N =
        static_cast<std::size_t>(3.5 * t / static_cast<double>(two_pi_l)) + 48;
    C sum(0.0L, 0.0L);
    for (std::size_t n = 1; n < N; ++n)
        sum += std::exp(-s * std::log(static_cast<long double>(n)));
    const long double dn = static_cast<long double>(N);
    const C n_pow = std::exp(-s * std::log(dn));
    sum += n_pow * dn / (s - 1.0L);
    sum += 0.5L * n_pow;
    C poch = s;
    C npow = n_pow / dn;
    for (int k = 1; k <= 8; ++k) {
        sum += em_tail_coef(k) * poch * npow;
        poch *= (s + static_cast<long double>(2 * k - 1)) *
                (s + static_cast<long double>(2 * k));
        npow /= dn * dn;
    }
    const long double th = theta_l(t);
    const C rotated = std::exp(C(0.0L, th)) * sum;
    return static_cast<double>(rotated.real());
}

double rs_z_at(double t, Correction c) {
    if (c == Correction::automatic)
        return t < z_exact_cutoff ? z_direct_at(t) : rs_z_at(t, Correction::c2);
    const double tau_v = std::sqrt(t / two_pi);
    const int N = static_cast<int>(std::floor(tau_v));
    const double p = tau_v - static_cast<double>(N);
    const double th = static_cast<double>(theta_l(t));
    double z = main_sum(t, th, N);
    if (c == Correction::none) return z;
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (-1)^(N-1)
    const double a = 1.0 / std::sqrt(tau_v);        // (t/2pi)^(-1/4)
    const double q = 1.0 / tau_v;                   // (t/2pi)^(-1/2)
    double corr = psi_deriv(p, 0);
    if (c == Correction::c1 || c == Correction::c2)
        corr += q * (-psi_deriv(p, 3) / (96.0 * M_PI * M_PI));
    if (c == Correction::c2)
        corr += q * q *
                (psi_deriv(p, 6) / (18432.0 * M_PI * M_PI * M_PI * M_PI) +
                 psi_deriv(p, 2) / (64.0 * M_PI * M_PI));
    return z + sign * a * corr;
}

// ---------------------------------------------------------------------------
// measured remainder envelopes
// ---------------------------------------------------------------------------

struct EnvelopeConstants {
    double k_none, k_c0, k_c1, k_c2;
};

const EnvelopeConstants& envelope_constants() {
    static const EnvelopeConstants e = [] {
        // reference: exact summation below the cutoff, deepest expansion
        // above (where it is itself within ~1e-8 absolute)
        constexpr int samples = 512;
        std::vector<double> dn(samples), d0(samples), d1(samples), d2(samples);
        par::for_each_index(samples, [&](std::size_t i) {
            const double t =
                100.0 * std::pow(1000.0, static_cast<double>(i) / (samples - 1));
            const double ref = rs_z_at(t, Correction::automatic);
            dn[i] = std::abs(rs_z_at(t, Correction::none) - ref) * std::pow(t, 0.25);
            d0[i] = std::abs(rs_z_at(t, Correction::c0) - ref) * std::pow(t, 0.75);
            d1[i] = std::abs(rs_z_at(t, Correction::c1) - ref) * std::pow(t, 1.25);
            d2[i] = t < z_exact_cutoff
                        ? std::abs(rs_z_at(t, Correction::c2) - ref) * std::pow(t, 1.75)
                        : 0.0;
        });
        EnvelopeConstants ec{0.0, 0.0, 0.0, 0.0};
        for (int i = 0; i < samples; ++i) {
            ec.k_none = std::max(ec.k_none, dn[i]);
            ec.k_c0 = std::max(ec.k_c0, d0[i]);
            ec.k_c1 = std::max(ec.k_c1, d1[i]);
            ec.k_c2 = std::max(ec.k_c2, d2[i]);
        }
        // headroom over the sampled maxima
        ec.k_none *= 1.25;
        ec.k_c0 *= 1.25;
        ec.k_c1 *= 1.25;
        ec.k_c2 *= 1.25;
        return ec;
    }();
    return e;
}

}  // namespace

CriticalT::CriticalT(double t) : t_(t) {
    if (!std::isfinite(t) || t < t_min)
        throw domain_error("critical-line height must satisfy t >= " + std::to_string(t_min) +
                           ", got " + std::to_string(t));
}

double tau(CriticalT t) { return std::sqrt(t.value() / two_pi); }

double theta(CriticalT t) { return theta_at(t.value()); }

double theta_at(double t) {
    if (!(t >= 0.0)) throw domain_error("theta requires t >= 0");
    return static_cast<double>(theta_l(t));
}

double theta_asymptotic_cutoff() { return theta_cutoff; }

double theta_exact(double t) {
    return static_cast<double>(im_log_gamma_quarter(t) - 0.5L * t * std::log(pi_l));
}

double theta_asymptotic(double t) { return static_cast<double>(theta_asym_l(t)); }

long double theta_integral(double T) {
    if (!(T >= 0.0)) throw domain_error("theta integral requires T >= 0");
    if (T == 0.0) return 0.0L;
    if (T >= theta_integral_cutoff) return theta_antiderivative(T);
    return static_cast<long double>(
        quad::adaptive_simpson([](double u) { return theta_at(u); }, 0.0, T, 1e-10));
}

double rs_Z(CriticalT t, Correction c) { return rs_z_at(t.value(), c); }

double zeta_mod(CriticalT t, Correction c) { return std::abs(rs_Z(t, c)); }

double exact_backend_cutoff() { return z_exact_cutoff; }

double z_direct(double t) {
    if (!(t >= 0.0)) throw domain_error("z_direct requires t >= 0");
    return z_direct_at(t);
}

double measured_k_rs() { return envelope_constants().k_none; }

double remainder_envelope(double t, Correction c) {
    const EnvelopeConstants& e = envelope_constants();
    switch (c) {
        case Correction::none: return e.k_none * std::pow(t, -0.25);
        case Correction::c0: return e.k_c0 * std::pow(t, -0.75);
        case Correction::c1: return e.k_c1 * std::pow(t, -1.25);
        case Correction::c2: return e.k_c2 * std::pow(t, -1.75);
        case Correction::automatic:
            return t < z_exact_cutoff ? 1e-10 : e.k_c2 * std::pow(t, -1.75);
    }
    return 0.0;
}

OscillatorBank make_bank(CriticalT x) {
    OscillatorBank b;
    b.base = x.value();
    const double tau_v = tau(x);
    b.term_count = static_cast<int>(std::floor(tau_v));
    b.frequencies.resize(static_cast<std::size_t>(b.term_count));
    b.amplitudes.resize(static_cast<std::size_t>(b.term_count));
    for (int n = 1; n <= b.term_count; ++n) {
        b.frequencies[static_cast<std::size_t>(n - 1)] = std::log(tau_v / n);
        b.amplitudes[static_cast<std::size_t>(n - 1)] = 2.0 / std::sqrt(static_cast<double>(n));
    }
    b.phase_const = -0.5 * b.base - M_PI / 8.0;
    b.remainder_bound = measured_k_rs() * std::pow(b.base, -0.25);
    return b;
}

double admissible_window(const OscillatorBank& bank) { return std::pow(bank.base, 0.25); }

double spectral_Z(const OscillatorBank& bank, double t) {
    const double v = admissible_window(bank);
    if (t < bank.base || t > bank.base + v)
        throw window_error("t outside the spectral validity window [" +
                               std::to_string(bank.base) + ", " + std::to_string(bank.base + v) +
                               "]; admissible V = " + std::to_string(v),
                           v);
    double s = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < bank.frequencies.size(); ++i) {
        const double x = bank.amplitudes[i] * std::cos(t * bank.frequencies[i] + bank.phase_const);
        const double u = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - u) + x;
        else
            comp += (x - u) + s;
        s = u;
    }
    return s + comp;
}

SpectralFitReport measure_k_spec(const std::vector<double>& bases, int points_per_window) {
    SpectralFitReport rep;
    if (points_per_window < 2) points_per_window = 2;
    struct Sample {
        double diff_scaled, base, t;
    };
    std::vector<Sample> all;
    for (double base : bases) {
        OscillatorBank bank = make_bank(CriticalT(base));
        const double v = admissible_window(bank);
        const double scale = std::pow(base, 0.25);
        std::vector<Sample> local(static_cast<std::size_t>(points_per_window));
        par::for_each_index(local.size(), [&](std::size_t j) {
            const double t =
                base + v * static_cast<double>(j) / static_cast<double>(points_per_window - 1);
            const double d = std::abs(spectral_Z(bank, t) - rs_z_at(t, Correction::c2));
            local[j] = {d * scale, base, t};
        });
        all.insert(all.end(), local.begin(), local.end());
    }
    for (const Sample& s : all) {
        if (s.diff_scaled > rep.k_spec) {
            rep.k_spec = s.diff_scaled;
            rep.worst_base = s.base;
            rep.worst_t = s.t;
        }
    }
    rep.samples = all.size();
    return rep;
}

}  // namespace zl::rs
