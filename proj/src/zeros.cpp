#include "zl/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zl/parallel.hpp"
#include "zl/rs.hpp"

namespace zl::zeros {

namespace {

constexpr double watermark_slack = 1e-9;

double z_at(double t) { return rs::rs_Z(rs::CriticalT(t), rs::default_correction); }

// --- compensated prefix sums -----------------------------------------------

std::vector<long double> build_prefix(const std::vector<double>& ords) {
    std::vector<long double> prefix(ords.size() + 1, 0.0L);
    long double s = 0.0L, c = 0.0L;
    for (std::size_t i = 0; i < ords.size(); ++i) {
        const long double x = ords[i];
        const long double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
        prefix[i + 1] = s + c;
    }
    return prefix;
}

// --- consistency checks -----------------------------------------------------

// S(t) from a candidate ordinate list assumed complete from 0.
double s_from_list(std::span<const double> ords, double t) {
    const auto it = std::upper_bound(ords.begin(), ords.end(), t);
    const double count = static_cast<double>(it - ords.begin());
    return count - rs::theta_at(t) / M_PI - 1.0;
}

// sum_{gamma <= x} (x - gamma) in long double.
long double hinge_sum(std::span<const double> ords, const std::vector<long double>& prefix,
                      double x) {
    const auto it = std::upper_bound(ords.begin(), ords.end(), x);
    const std::size_t n = static_cast<std::size_t>(it - ords.begin());
    return static_cast<long double>(n) * static_cast<long double>(x) - prefix[n];
}

constexpr long double pi_ld = 3.14159265358979323846264338328L;

// Mean of S over [a, b] via the closed antiderivative.
double mean_s(std::span<const double> ords, const std::vector<long double>& prefix, double a,
              double b) {
    const long double num = (hinge_sum(ords, prefix, b) - hinge_sum(ords, prefix, a)) -
                            static_cast<long double>(b - a) -
                            (rs::theta_integral(b) - rs::theta_integral(a)) / pi_ld;
    return static_cast<double>(num / static_cast<long double>(b - a));
}

// direction +1 nudges upward (low-end probes), -1 downward.
int sign_probe(double t, double nudge_span, int direction, double z_floor, bool* ok) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        const double p = t + direction * nudge_span * attempt / 8.0;
        if (p < rs::t_min) break;
        const double z = z_at(p);
        if (std::abs(z) > z_floor) {
            *ok = true;
            return z > 0.0 ? 1 : -1;
        }
    }
    *ok = false;
    return 0;
}

struct CheckInput {
    std::span<const double> ords;  // sorted, assumed complete over the span
    double lo = 0.0;               // span start (10 when anchored at zero)
    double hi = 0.0;               // span end
    bool anchored = false;         // true when ords are complete from 0
};

// Runs the three consistency checks.  On failure fills the report and
// returns false; the caller decides whether to refine or give up.
bool run_checks(const CheckInput& in, const ScanOptions& opts, VerifyReport& rep) {
    rep = VerifyReport{};
    const double span = in.hi - in.lo;
    if (span <= 0.0) return true;

    const auto prefix = build_prefix(std::vector<double>(in.ords.begin(), in.ords.end()));
    const double theta_lo_over_pi = rs::theta_at(in.lo) / M_PI;

    auto s_tilde = [&](double t) {
        if (in.anchored) return s_from_list(in.ords, t);
        const auto it0 = std::upper_bound(in.ords.begin(), in.ords.end(), in.lo);
        const auto it = std::upper_bound(in.ords.begin(), in.ords.end(), t);
        return static_cast<double>(it - it0) - (rs::theta_at(t) / M_PI - theta_lo_over_pi);
    };

    const int ncheck = std::max(2, opts.checkpoints);

    // 1. windowed drift of the mean of S.  A count defect at height x shifts
    // every window above x, so a failure is localized by walking back to the
    // onset of the deviation, not by the first window over the cap.
    const int nwin =
        std::max(1, std::min(ncheck - 1, static_cast<int>(span / opts.drift_window_min)));
    std::vector<double> means(static_cast<std::size_t>(nwin));
    for (int i = 0; i < nwin; ++i) {
        const double a = in.lo + span * i / nwin;
        const double b = in.lo + span * (i + 1) / nwin;
        means[static_cast<std::size_t>(i)] = mean_s(in.ords, prefix, a, b);
    }
    double offset = 0.0;
    if (!in.anchored) {
        std::vector<double> sorted = means;
        std::sort(sorted.begin(), sorted.end());
        offset = sorted[sorted.size() / 2];
    }
    for (int i = 0; i < nwin; ++i) {
        const double d = std::abs(means[static_cast<std::size_t>(i)] - offset);
        rep.max_drift = std::max(rep.max_drift, d);
        if (d > opts.drift_cap) {
            int onset = i;
            while (onset > 0 &&
                   std::abs(means[static_cast<std::size_t>(onset - 1)] - offset) >
                       opts.drift_cap / 3.0)
                --onset;
            if (onset > 0) --onset;  // the defect may sit in the last quiet window
            rep.ok = false;
            rep.failure_lo = in.lo + span * onset / nwin;
            rep.failure_hi = in.lo + span * (i + 1) / nwin;
            rep.failure = "S-drift above cap on window [" + std::to_string(rep.failure_lo) +
                          ", " + std::to_string(rep.failure_hi) + "]";
            return false;
        }
    }

    // 2. pointwise cap (the relative form subtracts S at the range start, so
    // unanchored spans get twice the excursion room)
    const double cap = in.anchored ? opts.s_cap : 2.0 * opts.s_cap;
    for (int i = 0; i < ncheck; ++i) {
        const double c = in.lo + span * i / (ncheck - 1);
        const double s = s_tilde(c);
        rep.max_abs_s = std::max(rep.max_abs_s, std::abs(s));
        if (std::abs(s) > cap) {
            rep.ok = false;
            rep.failure = "pointwise |S| above cap at t=" + std::to_string(c);
            rep.failure_lo = std::max(in.lo, c - span / (ncheck - 1));
            rep.failure_hi = std::min(in.hi, c + span / (ncheck - 1));
            return false;
        }
    }

    // 3. sign alternation of Z across consecutive ordinates.  Candidates
    // beyond the checked span (the scan keeps a verification margin) are
    // clipped so the tail probe stays above the last one.
    const auto clip_begin = std::upper_bound(in.ords.begin(), in.ords.end(), in.lo);
    const auto clip_end = std::upper_bound(in.ords.begin(), in.ords.end(), in.hi);
    const std::span<const double> ords(clip_begin, clip_end);
    std::vector<double> probes;
    probes.reserve(ords.size() + 2);
    if (ords.empty()) {
        probes.push_back(in.lo);
        probes.push_back(in.hi);
    } else {
        probes.push_back(in.anchored ? rs::t_min : in.lo);
        for (std::size_t i = 0; i + 1 < ords.size(); ++i)
            probes.push_back(0.5 * (ords[i] + ords[i + 1]));
        probes.push_back(in.hi);
    }
    rep.parity_pairs = probes.size() - 1;

    const std::size_t block = 512;
    int prev_sign = 0;
    for (std::size_t start = 0; start < probes.size(); start += block) {
        const std::size_t end = std::min(probes.size(), start + block);
        std::vector<int> sg(end - start, 0);
        std::vector<unsigned char> okf(end - start, 0);
        par::for_each_index(end - start, [&](std::size_t j) {
            bool ok = false;
            const std::size_t idx = start + j;
            double nudge = 0.5;
            int direction = idx == 0 ? 1 : -1;
            if (idx > 0 && idx + 1 < probes.size())
                nudge = 0.5 * (probes[idx] - probes[idx - 1]);
            sg[j] = sign_probe(probes[idx], nudge, direction, opts.z_floor, &ok);
            okf[j] = ok ? 1 : 0;
        });
        for (std::size_t j = 0; j < end - start; ++j) {
            const std::size_t idx = start + j;
            if (!okf[j]) {
                rep.ok = false;
                rep.failure = "cannot certify sign of Z near t=" + std::to_string(probes[idx]);
                rep.failure_lo = idx > 0 ? probes[idx - 1] : in.lo;
                rep.failure_hi = idx + 1 < probes.size() ? probes[idx + 1] : in.hi;
                return false;
            }
            const int expect = ords.empty() ? prev_sign : -prev_sign;
            if (prev_sign != 0 && sg[j] != expect) {
                rep.ok = false;
                rep.failure_lo = probes[idx - 1];
                rep.failure_hi = probes[idx];
                rep.failure = "sign alternation of Z fails between t=" +
                              std::to_string(rep.failure_lo) + " and t=" +
                              std::to_string(rep.failure_hi);
                return false;
            }
            prev_sign = sg[j];
        }
    }
    return true;
}

// --- grid scan ---------------------------------------------------------------

std::vector<double> build_grid(double lo, double hi, double factor) {
    std::vector<double> g;
    double t = lo;
    g.push_back(t);
    while (t < hi) {
        t += factor / std::log(std::max(t, rs::t_min));
        g.push_back(t);
    }
    return g;
}

double bisect_zero(double a, double b, double za, double zb, double tol) {
    if (za == 0.0) return a;
    if (zb == 0.0) return b;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double zm = z_at(m);
        if (zm == 0.0) return m;
        if ((za < 0.0) != (zm < 0.0)) {
            b = m;
            zb = zm;
        } else {
            a = m;
            za = zm;
        }
    }
    return 0.5 * (a + b);
}

std::vector<double> grid_scan(double lo, double hi, double factor, const ScanOptions& opts) {
    const std::vector<double> grid = build_grid(lo, hi, factor);
    std::vector<double> zv(grid.size());
    auto eval = [&](std::size_t i) { zv[i] = z_at(grid[i]); };
    if (opts.parallel)
        par::for_each_index(grid.size(), eval);
    else
        for (std::size_t i = 0; i < grid.size(); ++i) eval(i);

    std::vector<std::size_t> brackets;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if ((zv[i] < 0.0) != (zv[i + 1] < 0.0) || zv[i] == 0.0) brackets.push_back(i);

    std::vector<double> roots(brackets.size());
    auto refine = [&](std::size_t k) {
        const std::size_t i = brackets[k];
        roots[k] = bisect_zero(grid[i], grid[i + 1], zv[i], zv[i + 1], opts.refine_tol);
    };
    if (opts.parallel)
        par::for_each_index(brackets.size(), refine);
    else
        for (std::size_t k = 0; k < brackets.size(); ++k) refine(k);
    return roots;
}

void splice_ordinates(std::vector<double>& ords, double lo, double hi,
                      const std::vector<double>& fresh) {
    auto first = std::lower_bound(ords.begin(), ords.end(), lo);
    auto last = std::upper_bound(ords.begin(), ords.end(), hi);
    std::vector<double> keep;
    for (double r : fresh)
        if (r > lo && r <= hi) keep.push_back(r);
    ords.erase(first, last);
    ords.insert(std::lower_bound(ords.begin(), ords.end(), lo), keep.begin(), keep.end());
    // collapse refinement duplicates
    for (std::size_t i = 1; i < ords.size();) {
        if (ords[i] - ords[i - 1] < 1e-8)
            ords.erase(ords.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
}

std::vector<double> scan_verified(double lo, double hi_ext, bool anchored,
                                  const ScanOptions& opts) {
    std::vector<double> ords = grid_scan(lo, hi_ext, opts.grid_factor, opts);

    struct Region {
        double lo, hi;
        int level;
    };
    std::vector<Region> regions;
    VerifyReport rep;
    CheckInput in{std::span<const double>(ords), lo, hi_ext, anchored};
    for (int iter = 0; iter <= 4 * opts.max_halvings; ++iter) {
        in.ords = std::span<const double>(ords);
        if (run_checks(in, opts, rep)) return ords;
        int level = 1;
        for (const Region& r : regions)
            if (r.lo < rep.failure_hi && rep.failure_lo < r.hi) level = std::max(level, r.level + 1);
        if (level > opts.max_halvings)
            throw verification_error("zero scan cannot be reconciled: " + rep.failure,
                                     rep.failure_lo, rep.failure_hi);
        regions.push_back({rep.failure_lo, rep.failure_hi, level});
        const double pad = 2.0 * opts.grid_factor / std::log(std::max(rep.failure_lo, rs::t_min));
        const double rlo = std::max(lo, rep.failure_lo - pad);
        const double rhi = std::min(hi_ext, rep.failure_hi + pad);
        const std::vector<double> fresh =
            grid_scan(rlo, rhi, opts.grid_factor / std::pow(2.0, level), opts);
        splice_ordinates(ords, rlo, rhi, fresh);
    }
    throw verification_error("zero scan cannot be reconciled: " + rep.failure, rep.failure_lo,
                             rep.failure_hi);
}

}  // namespace

// --- ZeroStore ---------------------------------------------------------------

ZeroStore ZeroStore::from_ordinates(std::vector<double> ordinates, double verified_to,
                                    Source source) {
    for (std::size_t i = 0; i < ordinates.size(); ++i) {
        if (!std::isfinite(ordinates[i]))
            throw domain_error("non-finite ordinate at index " + std::to_string(i));
        if (i > 0 && ordinates[i] <= ordinates[i - 1])
            throw domain_error("ordinates must be strictly increasing (index " +
                               std::to_string(i) + ")");
    }
    if (!ordinates.empty()) {
        if (ordinates.front() <= 14.0)
            throw domain_error("first zero ordinate must exceed 14");
        if (ordinates.back() > verified_to + watermark_slack)
            throw domain_error("ordinate beyond the verified watermark");
    }
    ZeroStore s;
    s.ordinates_ = std::move(ordinates);
    s.prefix_ = build_prefix(s.ordinates_);
    s.verified_to_ = verified_to;
    s.source_ = source;
    return s;
}

std::size_t ZeroStore::count_below(double t) const {
    return static_cast<std::size_t>(
        std::upper_bound(ordinates_.begin(), ordinates_.end(), t) - ordinates_.begin());
}

void ZeroStore::require_covers(double t, const char* what) const {
    if (t > verified_to_ + watermark_slack)
        throw out_of_range_error(std::string(what) + " needs zeros verified to t=" +
                                     std::to_string(t) + " but the store is verified to " +
                                     std::to_string(verified_to_) +
                                     "; extend the scan to at least " + std::to_string(t),
                                 t);
}

double ZeroStore::count_N(double t) const {
    require_covers(t, "count_N");
    const std::size_t c = count_below(t);
    if (c > 0 && t - ordinates_[c - 1] <= 1e-9) return static_cast<double>(c) - 0.5;
    if (c < ordinates_.size() && ordinates_[c] - t <= 1e-9) return static_cast<double>(c) + 0.5;
    return static_cast<double>(c);
}

long double ZeroStore::ordinate_prefix(std::size_t n) const {
    return prefix_[std::min(n, ordinates_.size())];
}

// --- scanning ---------------------------------------------------------------

std::vector<double> scan_range(double t_lo, double t_hi, const ScanOptions& opts) {
    if (!(t_lo >= rs::t_min))
        throw domain_error("scan range must start at or above t=" + std::to_string(rs::t_min));
    if (!(t_lo < t_hi)) throw domain_error("scan range is empty or inverted");
    const double margin = std::min(opts.margin, t_hi - t_lo);
    const bool anchored = t_lo <= 14.0;
    std::vector<double> ords = scan_verified(t_lo, t_hi + margin, anchored, opts);
    std::vector<double> out;
    for (double g : ords)
        if (g > t_lo && g <= t_hi) out.push_back(g);
    return out;
}

ZeroStore scan_store(double t_lo, double t_hi, const ScanOptions& opts) {
    if (t_lo > 14.0)
        throw precondition_error(
            "a verified store must be scanned from below the first zero (t_lo <= 14)");
    std::vector<double> ords = scan_range(t_lo, t_hi, opts);
    return ZeroStore::from_ordinates(std::move(ords), t_hi, Source::computed);
}

bool verify_count(const ZeroStore& store, double t, const ScanOptions& opts,
                  VerifyReport* report) {
    store.require_covers(t, "verify_count");
    VerifyReport rep;
    if (t <= rs::t_min) {
        if (report) *report = rep;
        return true;
    }
    const std::size_t n = store.count_below(t);
    CheckInput in{store.ordinates().subspan(0, n), rs::t_min, t, true};
    const bool ok = run_checks(in, opts, rep);
    if (report) *report = rep;
    return ok;
}

// --- persistence -------------------------------------------------------------

ZeroStore import_table(std::istream& instream) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> ords;
    double verified_to = -1.0;
    bool have_header = false;
    while (std::getline(instream, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string tag = "# zeta-zeros v1 verified_to=";
            if (line.rfind(tag, 0) == 0) {
                try {
                    verified_to = std::stod(line.substr(tag.size()));
                    have_header = true;
                } catch (const std::exception&) {
                    throw ingestion_error("malformed store header", line_no);
                }
            }
            continue;
        }
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || *end != '\0')
            throw ingestion_error("unparsable ordinate '" + line + "'", line_no);
        if (!std::isfinite(v) || v <= 14.0)
            throw ingestion_error("ordinate out of range: " + line, line_no);
        if (!ords.empty() && v <= ords.back())
            throw ingestion_error("non-monotone ordinate " + line, line_no);
        ords.push_back(v);
    }
    if (!have_header) verified_to = ords.empty() ? 0.0 : ords.back();
    return ZeroStore::from_ordinates(std::move(ords), verified_to, Source::imported);
}

ZeroStore import_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ingestion_error("cannot open " + path.string(), 0);
    return import_table(in);
}

void write_store(const ZeroStore& store, std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# zeta-zeros v1 verified_to=%.9f\n", store.verified_to());
    out << buf;
    for (double g : store.ordinates()) {
        std::snprintf(buf, sizeof buf, "%.9f\n", g);
        out << buf;
    }
}

void write_store(const ZeroStore& store, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ingestion_error("cannot write " + path.string(), 0);
    write_store(store, out);
}

ZeroStore merge(const ZeroStore& a, const ZeroStore& b) {
    std::vector<double> merged;
    merged.reserve(a.size() + b.size());
    std::merge(a.ordinates().begin(), a.ordinates().end(), b.ordinates().begin(),
               b.ordinates().end(), std::back_inserter(merged));
    std::vector<double> dedup;
    for (double g : merged) {
        if (!dedup.empty() && g - dedup.back() < 5e-9) continue;
        dedup.push_back(g);
    }
    return ZeroStore::from_ordinates(std::move(dedup),
                                     std::max(a.verified_to(), b.verified_to()), Source::merged);
}

}  // namespace zl::zeros
