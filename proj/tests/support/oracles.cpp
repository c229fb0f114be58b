#include "support/oracles.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "zl/quad.hpp"
#include "zl/rs.hpp"

namespace oracles {

namespace {

// B_{2k} / (2k)! for the Euler-Maclaurin tail.
constexpr double em_coef[9] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3.3896802963225828e-13,  // B16/16!
    8.5860620562778446e-15,   // B18/18!
};

}  // namespace

std::complex<double> zeta_em(std::complex<double> s) {
    const double t = std::abs(s.imag());
    const std::size_t N =
        static_cast<std::size_t>(std::max(48.0, 3.5 * t / (2.0 * M_PI) + 48.0));
    std::complex<double> sum = 0.0, comp = 0.0;
    for (std::size_t n = 1; n < N; ++n) {
        const std::complex<double> term =
            std::exp(-s * std::log(static_cast<double>(n)));
        const std::complex<double> u = sum + term;
        comp += (std::abs(sum.real()) >= std::abs(term.real()))
                    ? (sum - u) + term
                    : (term - u) + sum;
        sum = u;
    }
    sum += comp;
    const double dn = static_cast<double>(N);
    const std::complex<double> n_pow_minus_s = std::exp(-s * std::log(dn));
    sum += n_pow_minus_s * dn / (s - 1.0);  // N^{1-s}/(s-1)
    sum += 0.5 * n_pow_minus_s;
    // tail: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    std::complex<double> poch = s;
    std::complex<double> npow = n_pow_minus_s / dn;
    for (int k = 1; k <= 9; ++k) {
        sum += em_coef[k - 1] * poch * npow;
        poch *= (s + std::complex<double>(2 * k - 1, 0.0)) *
                (s + std::complex<double>(2 * k, 0.0));
        npow /= dn * dn;
    }
    return sum;
}

double z_oracle(double t) {
    const std::complex<double> z = zeta_em(std::complex<double>(0.5, t));
    const double th = zl::rs::theta_at(t);
    return (std::exp(std::complex<double>(0.0, th)) * z).real();
}

double s_arg_tracking(double t) {
    // vertical leg: Re zeta > 0 on sigma = 2, so the principal argument is
    // already the continuous one
    std::complex<double> prev = zeta_em(std::complex<double>(2.0, t));
    double total = std::arg(prev);
    // horizontal leg: step sigma down to 1/2, unwrapping via ratios
    double sigma = 2.0;
    double step = 0.05;
    while (sigma > 0.5 + 1e-14) {
        const double ds = std::min(step, sigma - 0.5);
        const std::complex<double> next = zeta_em(std::complex<double>(sigma - ds, t));
        const double darg = std::arg(next / prev);
        if (std::abs(darg) > 0.5 && ds > 1e-6) {
            step = ds / 2.0;
            continue;
        }
        total += darg;
        prev = next;
        sigma -= ds;
        if (std::abs(darg) < 0.1) step = std::min(0.05, step * 2.0);
    }
    return total / M_PI;
}

double s1_piecewise(double T, const zl::zeros::ZeroStore& store) {
    std::vector<double> ends;
    ends.push_back(0.0);
    for (double g : store.ordinates())
        if (g < T) ends.push_back(g);
    ends.push_back(T);
    double acc = 0.0, comp = 0.0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double count = static_cast<double>(i);  // zeros below the piece
        const double piece = zl::quad::adaptive_simpson(
            [&](double u) { return count - zl::rs::theta_at(u) / M_PI - 1.0; }, ends[i],
            ends[i + 1], 1e-12);
        const double u = acc + piece;
        comp += (std::abs(acc) >= std::abs(piece)) ? (acc - u) + piece : (piece - u) + acc;
        acc = u;
    }
    return acc + comp;
}

// --- fixture loading ----------------------------------------------------------

std::string data_path(const std::string& name) {
    return std::string(ZL_TEST_DATA_DIR) + "/" + name;
}

namespace {

std::vector<std::vector<double>> load_rows(const std::string& name, std::size_t width) {
    std::ifstream in(data_path(name));
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (row.size() != width)
            throw std::runtime_error("bad fixture row in " + name + ": " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<Pair> load_pairs(const std::string& name) {
    std::vector<Pair> out;
    for (const auto& r : load_rows(name, 2)) out.push_back({r[0], r[1]});
    return out;
}

std::vector<double> load_column(const std::string& name) {
    std::vector<double> out;
    for (const auto& r : load_rows(name, 1)) out.push_back(r[0]);
    return out;
}

std::vector<std::array<double, 3>> load_triples(const std::string& name) {
    std::vector<std::array<double, 3>> out;
    for (const auto& r : load_rows(name, 3)) out.push_back({r[0], r[1], r[2]});
    return out;
}

ThetaIntegralFixture load_theta_integral() {
    std::ifstream in(data_path("theta_integral.txt"));
    if (!in) throw std::runtime_error("missing fixture theta_integral.txt");
    ThetaIntegralFixture fx;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string first;
        ss >> first;
        double v;
        ss >> v;
        if (first == "const")
            fx.antiderivative_const = v;
        else
            fx.values.push_back({std::stod(first), v});
    }
    return fx;
}

}  // namespace oracles
