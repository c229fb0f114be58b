#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "zl/parallel.hpp"
#include "zl/quad.hpp"
#include "zl/rs.hpp"

using zl::rs::CriticalT;
using zl::rs::Correction;

TEST_CASE("tau is sqrt(t / 2 pi)") {
    CHECK(zl::rs::tau(CriticalT(2.0 * M_PI * 100.0)) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(zl::rs::tau(CriticalT(8.0 * M_PI)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(zl::rs::tau(CriticalT(2.0 * M_PI * 1e4)) == doctest::Approx(100.0).epsilon(1e-14));
    double prev = 0.0;
    for (double t = 10.0; t < 1e4; t *= 1.7) {
        const double v = zl::rs::tau(CriticalT(t));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("heights below the supported floor are rejected") {
    CHECK_THROWS_AS(CriticalT(9.99), zl::domain_error);
    CHECK_THROWS_AS(CriticalT(-3.0), zl::domain_error);
    CHECK_THROWS_AS(CriticalT(std::nan("")), zl::domain_error);
    CHECK_NOTHROW(CriticalT(10.0));
}

TEST_CASE("leading-order phase vanishes against -pi/8 at t = 2 pi e") {
    const double t = 2.0 * M_PI * std::exp(1.0);
    const double leading = 0.5 * t * std::log(t / (2.0 * M_PI)) - 0.5 * t - M_PI / 8.0;
    CHECK(leading == doctest::Approx(-M_PI / 8.0).epsilon(1e-14));
}

TEST_CASE("theta matches the frozen log-Gamma reference to 1e-9") {
    for (const auto& [t, ref] : oracles::load_pairs("theta_values.txt")) {
        CHECK(std::abs(zl::rs::theta_at(t) - ref) < 1e-9);
    }
}

TEST_CASE("exact and asymptotic theta paths agree beyond the cutoff") {
    const double cutoff = zl::rs::theta_asymptotic_cutoff();
    for (double t : {cutoff, 50.0, 100.0, 1234.5, 1e4, 1e5})
        CHECK(std::abs(zl::rs::theta_exact(t) - zl::rs::theta_asymptotic(t)) < 1e-9);
}

TEST_CASE("theta integral: closed form matches frozen quadrature values") {
    const auto fx = oracles::load_theta_integral();
    for (const auto& [T, ref] : fx.values)
        CHECK(std::abs(static_cast<double>(zl::rs::theta_integral(T)) - ref) < 1e-8);
}

TEST_CASE("theta integral: closed form matches direct adaptive quadrature") {
    for (double T : {70.0, 150.0, 500.0}) {
        const double direct = zl::quad::adaptive_simpson(
            [](double u) { return zl::rs::theta_at(u); }, 0.0, T, 1e-9);
        CHECK(std::abs(static_cast<double>(zl::rs::theta_integral(T)) - direct) < 1e-8);
    }
}

TEST_CASE("Z matches the frozen high-precision values") {
    // truncation floor of the corrected main sum is ~1e-4 near t=14 and
    // drops below 2e-6 by t=100
    for (const auto& [t, ref] : oracles::load_pairs("z_values.txt")) {
        const double err = std::abs(zl::rs::rs_Z(CriticalT(t)) - ref);
        CAPTURE(t);
        CHECK(err < (t < zl::rs::exact_backend_cutoff() ? 1e-9 : 2e-6));
    }
}

TEST_CASE("zeta_mod is |Z| and matches the oracle modulus at t = 50") {
    for (double t : {50.0, 100.0, 333.3})
        CHECK(zl::rs::zeta_mod(CriticalT(t)) ==
              doctest::Approx(std::abs(zl::rs::rs_Z(CriticalT(t)))).epsilon(1e-15));
    for (const auto& row : oracles::load_triples("zeta_half_line.txt")) {
        const double mod = std::hypot(row[1], row[2]);
        CAPTURE(row[0]);
        CHECK(std::abs(zl::rs::zeta_mod(CriticalT(row[0])) - mod) < 1e-6);
    }
}

TEST_CASE("Euler-Maclaurin test oracle reproduces frozen zeta values") {
    for (const auto& row : oracles::load_triples("zeta_half_line.txt")) {
        const auto z = oracles::zeta_em(std::complex<double>(0.5, row[0]));
        CAPTURE(row[0]);
        CHECK(std::abs(z.real() - row[1]) < 5e-9);
        CHECK(std::abs(z.imag() - row[2]) < 5e-9);
    }
}

TEST_CASE("Z agrees with the runtime oracle on 1000 random heights") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> heights(1000), errs(1000);
    for (double& t : heights) t = 100.0 * std::pow(1000.0, u(rng));
    zl::par::for_each_index(heights.size(), [&](std::size_t i) {
        errs[i] = std::abs(zl::rs::rs_Z(CriticalT(heights[i])) - oracles::z_oracle(heights[i]));
    });
    for (std::size_t i = 0; i < heights.size(); ++i) {
        CAPTURE(heights[i]);
        CHECK(errs[i] < 1e-4);
    }
}

TEST_CASE("correction ladder: each level tightens the remainder scale") {
    // against the automatic reference, per the measured envelopes
    for (double t : {150.0, 1500.0, 15000.0}) {
        const double ref = zl::rs::rs_Z(CriticalT(t));
        const double d_none = std::abs(zl::rs::rs_Z(CriticalT(t), Correction::none) - ref);
        const double d_c0 = std::abs(zl::rs::rs_Z(CriticalT(t), Correction::c0) - ref);
        const double d_c1 = std::abs(zl::rs::rs_Z(CriticalT(t), Correction::c1) - ref);
        const double d_c2 = std::abs(zl::rs::rs_Z(CriticalT(t), Correction::c2) - ref);
        CHECK(d_none <= zl::rs::remainder_envelope(t, Correction::none));
        CHECK(d_c0 <= zl::rs::remainder_envelope(t, Correction::c0));
        CHECK(d_c1 <= zl::rs::remainder_envelope(t, Correction::c1));
        CHECK(d_c2 <= zl::rs::remainder_envelope(t, Correction::c2) + 1e-9);
    }
}

TEST_CASE("direct summation backend reproduces frozen zeta moduli") {
    for (const auto& row : oracles::load_triples("zeta_half_line.txt")) {
        if (row[0] > 2e4) continue;
        const double mod = std::hypot(row[1], row[2]);
        CAPTURE(row[0]);
        CHECK(std::abs(std::abs(zl::rs::z_direct(row[0])) - mod) < 1e-9);
    }
}

TEST_CASE("first-order correction at t = 1e5 sits inside the t^(-3/4) envelope") {
    const double t = 1e5;
    const double with_c1 = zl::rs::rs_Z(CriticalT(t), Correction::c1);
    const double without = zl::rs::rs_Z(CriticalT(t), Correction::c0);
    CHECK(std::abs(with_c1 - without) <= zl::rs::remainder_envelope(t, Correction::c0));
}

TEST_CASE("oscillator bank shape") {
    const auto bank = zl::rs::make_bank(CriticalT(2.0 * M_PI * 1e4));
    CHECK(bank.term_count == 100);
    CHECK(bank.frequencies.front() == doctest::Approx(std::log(100.0)).epsilon(1e-12));
    CHECK(bank.amplitudes.front() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(bank.amplitudes[3] == doctest::Approx(1.0).epsilon(1e-15));

    for (double x : {1e4, 2.0 * M_PI * 1e4, 31623.0}) {
        const auto b = zl::rs::make_bank(CriticalT(x));
        CHECK(b.term_count ==
              static_cast<int>(std::floor(std::sqrt(x / (2.0 * M_PI)))));
        for (std::size_t i = 1; i < b.frequencies.size(); ++i) {
            CHECK(b.frequencies[i] < b.frequencies[i - 1]);
            CHECK(b.amplitudes[i] < b.amplitudes[i - 1]);
        }
        CHECK(b.frequencies.back() >= 0.0);
        CHECK(b.remainder_bound == doctest::Approx(zl::rs::measured_k_rs() *
                                                   std::pow(x, -0.25)));
    }
}

TEST_CASE("spectral synthesis stays inside its window bound") {
    const auto bank = zl::rs::make_bank(CriticalT(1e4));
    const double v = zl::rs::admissible_window(bank);

    SUBCASE("agrees with the direct evaluation at the base point") {
        const double err = std::abs(zl::rs::spectral_Z(bank, bank.base) -
                                    zl::rs::rs_Z(CriticalT(bank.base)));
        CHECK(err < 10.0 * std::pow(bank.base, -0.25));
    }
    SUBCASE("agrees across the half window") {
        const double t = bank.base + 0.5 * v;
        const double err = std::abs(zl::rs::spectral_Z(bank, t) - zl::rs::rs_Z(CriticalT(t)));
        CHECK(err < 10.0 * std::pow(bank.base, -0.25));
    }
    SUBCASE("rejects points beyond the admissible width") {
        CHECK_THROWS_AS(zl::rs::spectral_Z(bank, bank.base + 2.0 * v), zl::window_error);
        try {
            zl::rs::spectral_Z(bank, bank.base + 2.0 * v);
        } catch (const zl::window_error& e) {
            CHECK(e.admissible_v == doctest::Approx(v));
        }
    }
}

TEST_CASE("spectral constant over random bases stays below 10") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> bases;
    for (int i = 0; i < 8; ++i) bases.push_back(1e3 * std::pow(100.0, u(rng)));
    const auto fit = zl::rs::measure_k_spec(bases, 25);
    CHECK(fit.k_spec > 0.0);
    CHECK(fit.k_spec <= 10.0);
}

TEST_CASE("|Z| is continuous at the oscillator-bank Lipschitz scale") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double t = 100.0 + 9000.0 * u(rng);
        const auto bank = zl::rs::make_bank(CriticalT(t));
        double lip = 0.5;  // phase-derivative remainder margin
        for (std::size_t j = 0; j < bank.frequencies.size(); ++j)
            lip += bank.amplitudes[j] * std::abs(bank.frequencies[j]);
        const double h = 1e-4 * (0.5 + u(rng));
        const double dz = std::abs(zl::rs::zeta_mod(CriticalT(t + h)) -
                                   zl::rs::zeta_mod(CriticalT(t)));
        CAPTURE(t);
        CHECK(zl::rs::zeta_mod(CriticalT(t)) >= 0.0);
        CHECK(dz <= lip * h * 1.5 + 1e-9);
    }
}
