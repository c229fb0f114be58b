// Compares the OpenMP kernels against their serial twins on representative
// workloads and checks that the deterministic reductions agree bitwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "zl/argmod.hpp"
#include "zl/moments.hpp"
#include "zl/parallel.hpp"
#include "zl/quad.hpp"
#include "zl/rs.hpp"
#include "zl/zeros.hpp"

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F>
double timed(F&& f, double* out) {
    const double t0 = now_ms();
    *out = f();
    return now_ms() - t0;
}

void row(const char* name, double serial_ms, double par_ms, double delta) {
    std::printf("%-28s %10.1f ms %10.1f ms %7.2fx   max|delta| %.3g\n", name, serial_ms, par_ms,
                serial_ms / (par_ms > 0.0 ? par_ms : 1.0), delta);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--threads") threads = std::atoi(argv[i + 1]);
    if (threads > 0) zl::par::set_threads(threads);
    std::printf("threads: %d\n", zl::par::max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    // 1. wide |Z|^2 window integral via the chunked reduction
    {
        auto z2 = [](double t) {
            const double z = zl::rs::rs_Z(zl::rs::CriticalT(t));
            return z * z;
        };
        const double a = 1e4, b = 1.1e4;
        const std::size_t n = 200000;
        const double h = (b - a) / static_cast<double>(n);
        double s_ser = 0.0, s_par = 0.0;
        const double t_ser = timed(
            [&] {
                return zl::par::sum_indexed_serial(n, [&](std::size_t i) {
                    return z2(a + h * (static_cast<double>(i) + 0.5)) * h;
                });
            },
            &s_ser);
        const double t_par = timed(
            [&] {
                return zl::par::sum_indexed(n, [&](std::size_t i) {
                    return z2(a + h * (static_cast<double>(i) + 0.5)) * h;
                });
            },
            &s_par);
        row("window integral |Z|^2", t_ser, t_par, std::abs(s_ser - s_par));
        if (s_ser != s_par) {
            std::fprintf(stderr, "FAIL: chunked reduction is not deterministic\n");
            return 1;
        }
    }

    // 2. zero scan
    {
        zl::zeros::ScanOptions opt;
        double c_ser = 0.0, c_par = 0.0;
        opt.parallel = false;
        const double t_ser = timed(
            [&] {
                return static_cast<double>(zl::zeros::scan_range(1e4, 1.05e4, opt).size());
            },
            &c_ser);
        opt.parallel = true;
        const double t_par = timed(
            [&] {
                return static_cast<double>(zl::zeros::scan_range(1e4, 1.05e4, opt).size());
            },
            &c_par);
        row("zero scan [1e4, 1.05e4]", t_ser, t_par, std::abs(c_ser - c_par));
    }

    // 3. spectral synthesis sweep
    {
        const auto bank = zl::rs::make_bank(zl::rs::CriticalT(5e4));
        const double v = zl::rs::admissible_window(bank);
        const std::size_t n = 100000;
        double m_ser = 0.0, m_par = 0.0;
        auto diff = [&](std::size_t i) {
            const double t = bank.base + v * static_cast<double>(i) / static_cast<double>(n - 1);
            return std::abs(zl::rs::spectral_Z(bank, t) - zl::rs::rs_Z(zl::rs::CriticalT(t)));
        };
        const double t_ser = timed(
            [&] {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) m = std::max(m, diff(i));
                return m;
            },
            &m_ser);
        const double t_par = timed([&] { return zl::par::max_indexed(n, diff); }, &m_par);
        row("spectral window sweep", t_ser, t_par, std::abs(m_ser - m_par));
    }

    std::printf("done\n");
    return 0;
}
