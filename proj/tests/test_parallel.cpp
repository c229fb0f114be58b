#include <doctest.h>

#include <cmath>
#include <vector>

#include "zl/parallel.hpp"
#include "zl/quad.hpp"

TEST_CASE("chunked reduction is deterministic across thread counts") {
    auto term = [](std::size_t i) {
        const double x = static_cast<double>(i) * 1e-3;
        return std::sin(x) / (1.0 + x);
    };
    const std::size_t n = 250000;
    const double serial = zl::par::sum_indexed_serial(n, term);
    const int saved = zl::par::max_threads();
    for (int threads : {1, 2, saved}) {
        zl::par::set_threads(threads);
        CHECK(zl::par::sum_indexed(n, term) == serial);
    }
    zl::par::set_threads(saved);
}

TEST_CASE("chunked reduction matches a naive sum to rounding accuracy") {
    auto term = [](std::size_t i) { return 1.0 / static_cast<double>(i + 1); };
    const std::size_t n = 100000;
    double naive = 0.0;
    for (std::size_t i = 0; i < n; ++i) naive += term(i);
    CHECK(zl::par::sum_indexed(n, term) == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("deterministic max keeps the first maximizer") {
    const double m = zl::par::max_indexed(1000, [](std::size_t i) {
        return std::sin(static_cast<double>(i));
    });
    double ref = -1e300;
    for (std::size_t i = 0; i < 1000; ++i)
        ref = std::max(ref, std::sin(static_cast<double>(i)));
    CHECK(m == ref);
}

TEST_CASE("adaptive Simpson handles smooth and kinked integrands") {
    const double smooth =
        zl::quad::adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 2.0, 1e-12);
    CHECK(smooth == doctest::Approx(0.8820813907624215).epsilon(1e-10));

    // |x - 1/3| has a kink; split handling keeps full accuracy
    auto kinked = [](double x) { return std::abs(x - 1.0 / 3.0); };
    const double split =
        zl::quad::adaptive_simpson_split(kinked, 0.0, 1.0, {1.0 / 3.0}, 1e-12);
    const double exact = (1.0 / 9.0 + 4.0 / 9.0) / 2.0;
    CHECK(split == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("composite Simpson: parallel equals serial bitwise") {
    auto f = [](double x) { return std::cos(3.0 * x) * std::exp(0.1 * x); };
    const double ser = zl::quad::composite_simpson(f, 0.0, 10.0, 4096, false);
    const double par = zl::quad::composite_simpson(f, 0.0, 10.0, 4096, true);
    CHECK(ser == par);
    // and the refinement loop converges to the analytic value
    const double exact = (0.1 * std::cos(30.0) * std::exp(1.0) +
                          3.0 * std::sin(30.0) * std::exp(1.0) - 0.1) /
                         (0.1 * 0.1 + 9.0);
    CHECK(zl::quad::refining_simpson(f, 0.0, 10.0, 64, 1e-10, 8) ==
          doctest::Approx(exact).epsilon(1e-8));
}
