#pragma once

// Riemann-Siegel machinery: the phase theta(t), its antiderivative, the
// main-sum evaluation of Z(t) with selectable correction depth, and the
// local-oscillator spectral synthesis around a base point.

#include <vector>

#include "zl/errors.hpp"

namespace zl::rs {

inline constexpr double t_min = 10.0;

// Height on the critical line; construction enforces t >= t_min.
class CriticalT {
  public:
    explicit CriticalT(double t);
    double value() const { return t_; }

  private:
    double t_;
};

// How many correction terms ride on top of the main sum.  `none` is the
// bare main sum; each further level divides the remainder by ~sqrt(t).
// `automatic` evaluates the expansion at full depth above the exact-backend
// cutoff and falls back to direct summation below it, where the asymptotic
// remainder would exceed the library's accuracy contracts.
enum class Correction { none, c0, c1, c2, automatic };

inline constexpr Correction default_correction = Correction::automatic;

// Heights below this use direct summation on the automatic path.
double exact_backend_cutoff();

// Z(t) by Euler-Maclaurin summation of zeta(1/2+it) times the phase factor;
// accuracy ~1e-12 for t up to ~2e4.  The automatic path uses it below the
// cutoff; it is not a Riemann-Siegel evaluation.
double z_direct(double t);

double tau(CriticalT t);

// theta to absolute accuracy 1e-9: log-Gamma evaluation below the switch
// height, certified asymptotic series above it.
double theta(CriticalT t);

// Same, valid for any t >= 0 (the argument integrals start at 0).
double theta_at(double t);

// integral_0^T theta, absolute accuracy better than 1e-8.
long double theta_integral(double T);

// The switch height between the exact and asymptotic theta paths.
double theta_asymptotic_cutoff();
double theta_exact(double t);       // log-Gamma route, any t >= 0
double theta_asymptotic(double t);  // series route, trustworthy above the cutoff

double rs_Z(CriticalT t, Correction c = default_correction);
double zeta_mod(CriticalT t, Correction c = default_correction);

// Empirical remainder envelope |Z - rs_Z(t, c)| <= envelope, measured once
// per process against the deepest correction level and cached.
double remainder_envelope(double t, Correction c);

// Measured constant K in envelope(t, none) = K * t^(-1/4).
double measured_k_rs();

struct OscillatorBank {
    double base = 0.0;
    int term_count = 0;
    std::vector<double> frequencies;  // ln(tau(base)/n), strictly decreasing
    std::vector<double> amplitudes;   // 2/sqrt(n)
    double phase_const = 0.0;         // -base/2 - pi/8
    double remainder_bound = 0.0;     // K_rs * base^(-1/4)
};

OscillatorBank make_bank(CriticalT x);

// Width of the validity window [base, base+V].
double admissible_window(const OscillatorBank& bank);

// 2 sum a_n cos(t w_n + phase_const); throws window_error outside the window.
double spectral_Z(const OscillatorBank& bank, double t);

struct SpectralFitReport {
    double k_spec = 0.0;     // max |spectral - rs| * base^(1/4)
    double worst_base = 0.0;
    double worst_t = 0.0;
    std::size_t samples = 0;
};

// Measures the spectral-window constant over the given bases with
// points_per_window samples each.
SpectralFitReport measure_k_spec(const std::vector<double>& bases, int points_per_window);

}  // namespace zl::rs
