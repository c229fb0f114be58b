#include "zl/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include <json.hpp>

#include "zl/parallel.hpp"
#include "zl/rs.hpp"

namespace zl::ladder {

namespace {

double abs_z(double t, rs::Correction c = rs::default_correction) {
    return std::abs(rs::rs_Z(rs::CriticalT(t), c));
}

struct Interval {
    double lo, hi;
    bool empty() const { return !(lo < hi); }
};

// Admissible interval for node r (1-based) given its predecessor, the gap
// tolerance, and the segment chain; clamped so the next segment stays
// reachable.
Interval admissible(const SegmentChain& chain, int r, double prev, bool gap_constrained,
                    double delta) {
    const auto& seg = chain.segments[static_cast<std::size_t>(r - 1)];
    Interval iv{seg.first, seg.second};
    if (gap_constrained) {
        iv.lo = std::max(iv.lo, prev + (1.0 - delta) * chain.g);
        iv.hi = std::min(iv.hi, prev + (1.0 + delta) * chain.g);
    } else {
        iv.lo = std::max(iv.lo, prev);  // strict ordering only
    }
    if (r < chain.k) {
        const auto& next = chain.segments[static_cast<std::size_t>(r)];
        iv.lo = std::max(iv.lo, next.first - (1.0 + delta) * chain.g);
        iv.hi = std::min(iv.hi, next.second - (1.0 - delta) * chain.g);
    }
    return iv;
}

struct Candidates {
    std::vector<double> pos;
    std::vector<double> lnz;  // ln |Z|, only entries with |Z| > z_floor kept
};

Candidates sample_candidates(const Interval& iv, int n, std::mt19937_64& rng, double z_floor,
                             long& evals) {
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    std::vector<double> pos(static_cast<std::size_t>(n));
    const double step = (iv.hi - iv.lo) / n;
    for (int i = 0; i < n; ++i)
        pos[static_cast<std::size_t>(i)] =
            std::clamp(iv.lo + step * (i + 0.5 + jitter(rng)), iv.lo, iv.hi);
    std::vector<double> z(pos.size());
    par::for_each_index(pos.size(), [&](std::size_t i) { z[i] = abs_z(pos[i]); });
    evals += n;
    Candidates out;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        if (z[i] > z_floor) {
            out.pos.push_back(pos[i]);
            out.lnz.push_back(std::log(z[i]));
        }
    }
    return out;
}

}  // namespace

double gap_law(double T) { return (1.0 - euler_gamma) * T / std::log(T); }

SegmentChain build_segments(double T, double epsilon, int k) {
    if (!(T >= 1e3)) throw precondition_error("build_segments requires T >= 1e3");
    if (k < 1 || k > k_max)
        throw precondition_error("segment count must be between 1 and " + std::to_string(k_max));
    if (!(epsilon > 0.0) || epsilon >= 0.5)
        throw precondition_error("epsilon must lie in (0, 0.5)");
    SegmentChain chain;
    chain.T = T;
    chain.epsilon = epsilon;
    chain.H = std::pow(T, 0.5 + epsilon);
    chain.g = gap_law(T);
    chain.k = k;
    if (!(chain.g > chain.H))
        throw precondition_error("segments overlap at this height: gap " +
                                 std::to_string(chain.g) + " does not exceed window " +
                                 std::to_string(chain.H));
    for (int r = 1; r <= k; ++r) {
        const double center = T + r * chain.g;
        chain.segments.emplace_back(center - 0.5 * chain.H, center + 0.5 * chain.H);
    }
    return chain;
}

double choose_alpha0(double T, int l, const moments::MomentEstimate& est,
                     const argmod::RootList& roots, const zeros::ZeroStore& store) {
    if (std::abs(est.T - T) > 1e-9 || est.l != l)
        throw precondition_error("moment estimate does not match the requested window");
    if (!(est.c_hat > 0.0)) throw precondition_error("window moment must be positive");
    const double H = est.H;
    const double target = std::pow(est.c_hat, 1.0 / (2.0 * l));
    if (!(target > 1e-6))
        throw precondition_error("window mean value is too small to separate from roots of S1");
    store.require_covers(T + H, "choose_alpha0");

    auto f = [&](double t) { return std::abs(argmod::S1(t, store)) - target; };

    double alpha_prev = 0.0;
    bool have_prev = false;
    std::size_t n = 257;
    for (int halving = 0; halving < 12; ++halving, n = 2 * n - 1) {
        std::vector<double> vals(n);
        par::for_each_index(n, [&](std::size_t i) {
            vals[i] = f(T + H * static_cast<double>(i) / static_cast<double>(n - 1));
        });
        bool above = false, below = false;
        for (double v : vals) {
            above |= v > 0.0;
            below |= v < 0.0;
        }
        if (!above || !below) {
            if (halving < 6) continue;  // not yet resolved, refine
            throw precondition_error("mean value not attained at scan resolution");
        }
        std::size_t first = n;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if ((vals[i] < 0.0) != (vals[i + 1] < 0.0) || vals[i] == 0.0) {
                first = i;
                break;
            }
        if (first == n) continue;
        double a = T + H * static_cast<double>(first) / static_cast<double>(n - 1);
        double b = T + H * static_cast<double>(first + 1) / static_cast<double>(n - 1);
        double fa = vals[first];
        while (b - a > 1e-11) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;  // ulp-limited
            const double fm = f(m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fa < 0.0) != (fm < 0.0))
                b = m;
            else {
                a = m;
                fa = fm;
            }
        }
        const double alpha = 0.5 * (a + b);
        if (have_prev && std::abs(alpha - alpha_prev) < 1e-7) {
            for (double mu : roots.roots)
                if (std::abs(mu - alpha) < 1e-6)
                    throw precondition_error("selected alpha0 collides with a root of S1");
            if (!(alpha > T) || !(alpha < T + H))
                throw precondition_error("selected alpha0 left the window");
            return alpha;
        }
        alpha_prev = alpha;
        have_prev = true;
    }
    throw precondition_error("mean-value crossing did not stabilize under grid refinement");
}

double q_product(const std::vector<double>& xs, const std::vector<double>& ys, double z_floor) {
    if (xs.size() != ys.size() || xs.empty())
        throw domain_error("q_product needs equally sized, non-empty node lists");
    if (xs.size() > static_cast<std::size_t>(k_max))
        throw domain_error("q_product supports at most " + std::to_string(k_max) + " factors");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] <= xs[i - 1] || ys[i] <= ys[i - 1])
            throw domain_error("q_product nodes must be strictly increasing");
    }
    double prod = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double zx = abs_z(xs[i]), zy = abs_z(ys[i]);
        if (zx <= z_floor)
            throw precondition_error("node too close to a zero: x=" + std::to_string(xs[i]));
        if (zy <= z_floor)
            throw precondition_error("node too close to a zero: y=" + std::to_string(ys[i]));
        prod *= zx / zy;
    }
    return prod;
}

namespace {

struct SearchState {
    SegmentChain chain;
    int l = 1;
    double alpha0 = 0.0;
    double d0 = 0.0;  // ln lhs - ln(pi c_hat^(1/2l))
    std::vector<double> alphas, betas, ln_a, ln_b;
    long evals = 0;

    double signed_residual() const {
        double s = 0.0;
        for (int r = 0; r < chain.k; ++r)
            s += ln_a[static_cast<std::size_t>(r)] - ln_b[static_cast<std::size_t>(r)];
        return d0 + s / l;
    }
};

// One pass of per-node local grids, in fixed node order.
void descent_sweeps(SearchState& st, const SearchParams& params) {
    const int k = st.chain.k;
    for (int sweep = 0; sweep < params.descent_sweeps && st.evals < params.eval_budget;
         ++sweep) {
        for (int node = 0; node < 2 * k && st.evals < params.eval_budget; ++node) {
            const bool is_alpha = node < k;
            const int r = (is_alpha ? node : node - k) + 1;
            std::vector<double>& seq = is_alpha ? st.alphas : st.betas;
            std::vector<double>& lnseq = is_alpha ? st.ln_a : st.ln_b;
            const double prev =
                r == 1 ? (is_alpha ? st.alpha0 : st.chain.T) : seq[static_cast<std::size_t>(r - 2)];
            Interval iv = admissible(st.chain, r, prev, is_alpha || r > 1, params.delta_gap);
            if (r < k) {  // keep the successor's gap feasible
                const double next = seq[static_cast<std::size_t>(r)];
                iv.lo = std::max(iv.lo, next - (1.0 + params.delta_gap) * st.chain.g);
                iv.hi = std::min(iv.hi, next - (1.0 - params.delta_gap) * st.chain.g);
            }
            if (iv.empty()) continue;
            constexpr int local = 33;
            std::vector<double> pos(local), lz(local);
            for (int i = 0; i < local; ++i)
                pos[static_cast<std::size_t>(i)] = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / local;
            par::for_each_index(pos.size(), [&](std::size_t i) {
                const double z = abs_z(pos[i]);
                lz[i] = z > params.z_floor ? std::log(z) : HUGE_VAL;
            });
            st.evals += local;
            const double base = st.signed_residual();
            const double own = lnseq[static_cast<std::size_t>(r - 1)];
            double best = std::abs(base);
            std::size_t pick = pos.size();
            for (std::size_t i = 0; i < pos.size(); ++i) {
                if (!std::isfinite(lz[i])) continue;
                const double delta = (lz[i] - own) / st.l * (is_alpha ? 1.0 : -1.0);
                if (std::abs(base + delta) < best) {
                    best = std::abs(base + delta);
                    pick = i;
                }
            }
            if (pick < pos.size()) {
                seq[static_cast<std::size_t>(r - 1)] = pos[pick];
                lnseq[static_cast<std::size_t>(r - 1)] = lz[pick];
            }
        }
    }
}

// 1-d solve on the last beta: ln|Z(beta_k)| must land on the value that
// zeroes the signed residual.
void polish_last_beta(SearchState& st, const SearchParams& params) {
    const int k = st.chain.k;
    const double prev = k == 1 ? st.chain.T : st.betas[static_cast<std::size_t>(k - 2)];
    const Interval iv = admissible(st.chain, k, prev, k > 1, params.delta_gap);
    if (iv.empty()) return;
    const double s_star =
        st.ln_b[static_cast<std::size_t>(k - 1)] + st.signed_residual() * st.l;
    constexpr int fine = 512;
    std::vector<double> pos(fine), g(fine);
    for (int i = 0; i < fine; ++i)
        pos[static_cast<std::size_t>(i)] = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / fine;
    par::for_each_index(pos.size(), [&](std::size_t i) {
        const double z = abs_z(pos[i]);
        g[i] = z > params.z_floor ? std::log(z) - s_star : NAN;
    });
    st.evals += fine;
    const double cur = st.betas[static_cast<std::size_t>(k - 1)];
    double best_dist = HUGE_VAL;
    std::size_t bracket = pos.size();
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
        if (!std::isfinite(g[i]) || !std::isfinite(g[i + 1])) continue;
        if ((g[i] < 0.0) != (g[i + 1] < 0.0) || g[i] == 0.0) {
            const double mid = 0.5 * (pos[i] + pos[i + 1]);
            if (std::abs(mid - cur) < best_dist) {
                best_dist = std::abs(mid - cur);
                bracket = i;
            }
        }
    }
    if (bracket == pos.size()) return;
    double a = pos[bracket], b = pos[bracket + 1], ga = g[bracket];
    while (b - a > 1e-13 * std::max(1.0, a)) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // ulp-limited
        const double z = abs_z(m);
        ++st.evals;
        const double gm = z > params.z_floor ? std::log(z) - s_star : HUGE_VAL;
        if (!std::isfinite(gm)) break;
        if (gm == 0.0) {
            a = b = m;
            break;
        }
        if ((ga < 0.0) != (gm < 0.0))
            b = m;
        else {
            a = m;
            ga = gm;
        }
    }
    const double beta = 0.5 * (a + b);
    const double z = abs_z(beta);
    if (z > params.z_floor) {
        st.betas[static_cast<std::size_t>(k - 1)] = beta;
        st.ln_b[static_cast<std::size_t>(k - 1)] = std::log(z);
    }
}

LadderConfiguration finish(const SearchState& st, double epsilon, double c_hat, double lhs,
                           const SearchParams& params) {
    LadderConfiguration cfg;
    cfg.T = st.chain.T;
    cfg.epsilon = epsilon;
    cfg.l = st.l;
    cfg.k = st.chain.k;
    cfg.c_hat = c_hat;
    cfg.alpha0 = st.alpha0;
    cfg.alphas = st.alphas;
    cfg.betas = st.betas;
    cfg.lhs = lhs;
    double sum = 0.0;
    for (int r = 0; r < st.chain.k; ++r)
        sum += st.ln_a[static_cast<std::size_t>(r)] - st.ln_b[static_cast<std::size_t>(r)];
    const double ln_anchor = std::log(M_PI) + std::log(c_hat) / (2.0 * st.l);
    const double ln_rhs = ln_anchor - sum / st.l;
    cfg.rhs = std::exp(ln_rhs);
    cfg.residual = std::abs(std::log(lhs) - ln_rhs);
    if (cfg.residual > params.residual_cap)
        throw search_failure("no configuration within tolerance: residual " +
                                 std::to_string(cfg.residual) + " exceeds cap " +
                                 std::to_string(params.residual_cap),
                             cfg);
    return cfg;
}

}  // namespace

LadderConfiguration search_configuration(double T, int l, double epsilon, int k,
                                         const moments::MomentEstimate& est,
                                         const argmod::RootList& roots,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params) {
    SearchState st;
    st.chain = build_segments(T, epsilon, k);
    st.l = l;
    store.require_covers(st.chain.segments.back().second, "search_configuration");

    st.alpha0 = choose_alpha0(T, l, est, roots, store);
    const double lhs = M_PI * std::abs(argmod::S1(st.alpha0, store));
    const double ln_anchor = std::log(M_PI) + std::log(est.c_hat) / (2.0 * l);
    st.d0 = std::log(lhs) - ln_anchor;
    const double target_sum = -static_cast<double>(l) * st.d0;

    std::mt19937_64 rng(params.seed);
    st.ln_a.resize(static_cast<std::size_t>(k));
    st.ln_b.resize(static_cast<std::size_t>(k));
    double running = 0.0;
    for (int r = 1; r <= k; ++r) {
        const double prev_a = r == 1 ? st.alpha0 : st.alphas.back();
        const Interval ia = admissible(st.chain, r, prev_a, true, params.delta_gap);
        const Interval ib = r == 1 ? admissible(st.chain, r, T, false, params.delta_gap)
                                   : admissible(st.chain, r, st.betas.back(), true,
                                                params.delta_gap);
        if (ia.empty() || ib.empty())
            throw precondition_error("no admissible node positions in segment " +
                                     std::to_string(r));
        const Candidates ca =
            sample_candidates(ia, params.candidates_per_node, rng, params.z_floor, st.evals);
        const Candidates cb =
            sample_candidates(ib, params.candidates_per_node, rng, params.z_floor, st.evals);
        if (ca.pos.empty() || cb.pos.empty())
            throw precondition_error("all candidate nodes in segment " + std::to_string(r) +
                                     " sit on zeros");
        const double want = target_sum * r / k - running;
        std::size_t bi = 0, bj = 0;
        double best = HUGE_VAL;
        for (std::size_t i = 0; i < ca.pos.size(); ++i)
            for (std::size_t j = 0; j < cb.pos.size(); ++j) {
                const double miss = std::abs(ca.lnz[i] - cb.lnz[j] - want);
                if (miss < best) {
                    best = miss;
                    bi = i;
                    bj = j;
                }
            }
        st.alphas.push_back(ca.pos[bi]);
        st.betas.push_back(cb.pos[bj]);
        st.ln_a[static_cast<std::size_t>(r - 1)] = ca.lnz[bi];
        st.ln_b[static_cast<std::size_t>(r - 1)] = cb.lnz[bj];
        running += ca.lnz[bi] - cb.lnz[bj];
    }

    descent_sweeps(st, params);
    polish_last_beta(st, params);
    return finish(st, epsilon, est.c_hat, lhs, params);
}

LadderConfiguration refine_configuration(const LadderConfiguration& cfg,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params) {
    SearchState st;
    st.chain = build_segments(cfg.T, cfg.epsilon, cfg.k);
    store.require_covers(st.chain.segments.back().second, "refine_configuration");
    st.l = cfg.l;
    st.alpha0 = cfg.alpha0;
    const double lhs = M_PI * std::abs(argmod::S1(cfg.alpha0, store));
    const double ln_anchor = std::log(M_PI) + std::log(cfg.c_hat) / (2.0 * cfg.l);
    st.d0 = std::log(lhs) - ln_anchor;
    st.alphas = cfg.alphas;
    st.betas = cfg.betas;
    for (double a : st.alphas) st.ln_a.push_back(std::log(abs_z(a)));
    for (double b : st.betas) st.ln_b.push_back(std::log(abs_z(b)));
    descent_sweeps(st, params);
    polish_last_beta(st, params);
    return finish(st, cfg.epsilon, cfg.c_hat, lhs, params);
}

std::vector<std::string> validate_configuration(const LadderConfiguration& cfg,
                                                const SearchParams& params) {
    std::vector<std::string> bad;
    auto complain = [&](const std::string& s) { bad.push_back(s); };
    if (cfg.k < 1 || cfg.k > k_max) complain("k out of range");
    if (cfg.l < 1) complain("l out of range");
    if (static_cast<int>(cfg.alphas.size()) != cfg.k ||
        static_cast<int>(cfg.betas.size()) != cfg.k)
        complain("node list sizes do not match k");
    if (!bad.empty()) return bad;

    SegmentChain chain;
    try {
        chain = build_segments(cfg.T, cfg.epsilon, cfg.k);
    } catch (const std::exception& e) {
        complain(e.what());
        return bad;
    }
    if (!(cfg.alpha0 > cfg.T) || !(cfg.alpha0 < cfg.T + chain.H))
        complain("alpha0 outside (T, T+H)");
    double prev = cfg.alpha0;
    for (int r = 0; r < cfg.k; ++r) {
        if (!(cfg.alphas[static_cast<std::size_t>(r)] > prev))
            complain("alpha ordering fails at r=" + std::to_string(r + 1));
        prev = cfg.alphas[static_cast<std::size_t>(r)];
    }
    prev = cfg.T;
    for (int r = 0; r < cfg.k; ++r) {
        if (!(cfg.betas[static_cast<std::size_t>(r)] > prev))
            complain("beta ordering fails at r=" + std::to_string(r + 1));
        prev = cfg.betas[static_cast<std::size_t>(r)];
    }
    for (int r = 0; r < cfg.k; ++r) {
        const auto& seg = chain.segments[static_cast<std::size_t>(r)];
        if (cfg.alphas[static_cast<std::size_t>(r)] < seg.first ||
            cfg.alphas[static_cast<std::size_t>(r)] > seg.second)
            complain("alpha_" + std::to_string(r + 1) + " outside its segment");
        if (cfg.betas[static_cast<std::size_t>(r)] < seg.first ||
            cfg.betas[static_cast<std::size_t>(r)] > seg.second)
            complain("beta_" + std::to_string(r + 1) + " outside its segment");
    }
    auto check_gaps = [&](const std::vector<double>& seq, double first_prev, bool include_first,
                          const char* name) {
        double p = first_prev;
        for (int r = 0; r < cfg.k; ++r) {
            const double gap = seq[static_cast<std::size_t>(r)] - p;
            const bool constrained = include_first || r > 0;
            if (constrained && std::abs(gap - chain.g) > params.delta_gap * chain.g)
                complain(std::string(name) + " gap at r=" + std::to_string(r + 1) +
                         " violates the gap law");
            p = seq[static_cast<std::size_t>(r)];
        }
    };
    check_gaps(cfg.alphas, cfg.alpha0, true, "alpha");
    check_gaps(cfg.betas, 0.0, false, "beta");
    for (int r = 0; r < cfg.k; ++r) {
        if (abs_z(cfg.alphas[static_cast<std::size_t>(r)]) <= params.z_floor)
            complain("alpha_" + std::to_string(r + 1) + " sits on a zero");
        if (abs_z(cfg.betas[static_cast<std::size_t>(r)]) <= params.z_floor)
            complain("beta_" + std::to_string(r + 1) + " sits on a zero");
    }
    if (!(cfg.c_hat > 0.0)) complain("c_hat must be positive");
    if (std::isfinite(cfg.lhs) && std::isfinite(cfg.rhs) && cfg.lhs > 0.0 && cfg.rhs > 0.0) {
        const double res = std::abs(std::log(cfg.lhs / cfg.rhs));
        if (std::abs(res - cfg.residual) > 1e-9) complain("stored residual is inconsistent");
    } else {
        complain("lhs/rhs must be positive finite");
    }
    return bad;
}

FactorizationReport verify_factorization(const LadderConfiguration& cfg,
                                         const argmod::RootList& roots,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params) {
    FactorizationReport rep;
    const auto bad = validate_configuration(cfg, params);
    if (!bad.empty()) throw verification_error("configuration invalid: " + bad.front());

    // (i) the two routes to the left-hand side
    const double s1_alpha = argmod::S1(cfg.alpha0, store);
    rep.lhs_s1 = M_PI * std::abs(s1_alpha);
    const argmod::ReducedIntegral red = argmod::reduce_integral(cfg.alpha0, roots, store);
    rep.mu_kbar = red.mu_kbar;
    rep.lhs_reduced = M_PI * std::abs(red.value);
    if (std::abs(rep.lhs_s1 - rep.lhs_reduced) > 1e-6)
        throw verification_error("reduced-integral route disagrees with S1 route: |" +
                                 std::to_string(rep.lhs_s1) + " - " +
                                 std::to_string(rep.lhs_reduced) + "| > 1e-6");

    // (ii) corrected vs bare oscillator sums within the measured envelopes
    double ln_p_corr = 0.0, ln_p_bare = 0.0, env = 0.0;
    for (int r = 0; r < cfg.k; ++r) {
        const double a = cfg.alphas[static_cast<std::size_t>(r)];
        const double b = cfg.betas[static_cast<std::size_t>(r)];
        for (const double t : {a, b}) {
            const double m = abs_z(t);
            const double bound = rs::remainder_envelope(t, rs::Correction::none) +
                                 rs::remainder_envelope(t, rs::Correction::c2);
            env += m > bound ? -std::log1p(-bound / m) : 1e6;
        }
        ln_p_corr += std::log(abs_z(a)) - std::log(abs_z(b));
        ln_p_bare += std::log(abs_z(a, rs::Correction::none)) -
                     std::log(abs_z(b, rs::Correction::none));
    }
    const double ln_anchor = std::log(M_PI) + std::log(cfg.c_hat) / (2.0 * cfg.l);
    const double ln_rhs_corr = ln_anchor - ln_p_corr / cfg.l;
    const double ln_rhs_bare = ln_anchor - ln_p_bare / cfg.l;
    rep.rhs_corrected = std::exp(ln_rhs_corr);
    rep.rhs_bare = std::exp(ln_rhs_bare);
    if (std::abs(rep.lhs_s1 - cfg.lhs) > 1e-9 * std::max(1.0, cfg.lhs))
        throw verification_error("stored lhs diverges from its recomputation");
    if (std::abs(std::log(rep.rhs_corrected / cfg.rhs)) > 1e-9)
        throw verification_error("stored rhs diverges from its recomputation");
    rep.bare_gap_ln = std::abs(ln_rhs_bare - ln_rhs_corr);
    rep.bare_envelope_ln = env / cfg.l;
    if (rep.bare_gap_ln > rep.bare_envelope_ln)
        throw verification_error("bare-sum route leaves the measured remainder envelope: gap " +
                                 std::to_string(rep.bare_gap_ln) + " > " +
                                 std::to_string(rep.bare_envelope_ln));

    // (iii) product-form identity, exact in log space
    const double ln_lhs = std::log(rep.lhs_s1);
    rep.signed_residual = ln_lhs - ln_rhs_corr;
    const double ln_product_form =
        cfg.l * std::log(M_PI) + 0.5 * std::log(cfg.c_hat) - cfg.l * ln_lhs;
    rep.eq_product_gap =
        std::abs((ln_p_corr - ln_product_form) - cfg.l * rep.signed_residual);
    if (rep.eq_product_gap > 1e-12)
        throw verification_error("product-form identity defect " +
                                 std::to_string(rep.eq_product_gap) + " exceeds 1e-12");

    // (iv) mean-value corollaries
    rep.mean_0_alpha0 = argmod::mean_arg(0.0, cfg.alpha0, store);
    rep.mean_mu_alpha0 = argmod::mean_arg(red.mu_kbar, cfg.alpha0, store);
    rep.mean_ratio_defect = std::abs(rep.mean_mu_alpha0 * (cfg.alpha0 - red.mu_kbar) -
                                     rep.mean_0_alpha0 * cfg.alpha0);
    if (rep.mean_ratio_defect > 1e-6 * M_PI)
        throw verification_error("mean-value ratio identity defect " +
                                 std::to_string(rep.mean_ratio_defect) + " exceeds 1e-6*pi");

    rep.ok = true;
    return rep;
}

// --- reports -----------------------------------------------------------------

ConfigurationReport make_report(const LadderConfiguration& cfg, const argmod::RootList& roots,
                                const zeros::ZeroStore& store) {
    ConfigurationReport rep;
    rep.cfg = cfg;
    const argmod::ReducedIntegral red = argmod::reduce_integral(cfg.alpha0, roots, store);
    rep.mu_kbar = red.mu_kbar;
    rep.mean_0_alpha0 = argmod::mean_arg(0.0, cfg.alpha0, store);
    rep.mean_mukbar_alpha0 = argmod::mean_arg(red.mu_kbar, cfg.alpha0, store);
    double prev = cfg.alpha0;
    for (double a : cfg.alphas) {
        rep.gaps_alpha.push_back(a - prev);
        prev = a;
    }
    for (std::size_t i = 1; i < cfg.betas.size(); ++i)
        rep.gaps_beta.push_back(cfg.betas[i] - cfg.betas[i - 1]);
    return rep;
}

namespace {

void put_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    out += buf;
}

void put_field(std::string& out, const char* key, double v, bool comma = true) {
    out += '"';
    out += key;
    out += "\":";
    put_number(out, v);
    if (comma) out += ',';
}

void put_array(std::string& out, const char* key, const std::vector<double>& v,
               bool comma = true) {
    out += '"';
    out += key;
    out += "\":[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        put_number(out, v[i]);
    }
    out += ']';
    if (comma) out += ',';
}

void put_report_fields(std::string& out, const ConfigurationReport& r) {
    put_field(out, "T", r.cfg.T);
    put_field(out, "epsilon", r.cfg.epsilon);
    out += "\"l\":" + std::to_string(r.cfg.l) + ",";
    out += "\"k\":" + std::to_string(r.cfg.k) + ",";
    put_field(out, "c_hat", r.cfg.c_hat);
    put_field(out, "alpha0", r.cfg.alpha0);
    put_array(out, "alphas", r.cfg.alphas);
    put_array(out, "betas", r.cfg.betas);
    put_field(out, "lhs", r.cfg.lhs);
    put_field(out, "rhs", r.cfg.rhs);
    put_field(out, "residual", r.cfg.residual);
    put_field(out, "mu_kbar", r.mu_kbar);
    put_field(out, "mean_0_alpha0", r.mean_0_alpha0);
    put_field(out, "mean_mukbar_alpha0", r.mean_mukbar_alpha0);
    put_array(out, "gaps_alpha", r.gaps_alpha);
    put_array(out, "gaps_beta", r.gaps_beta, false);
}

}  // namespace

std::string to_json(const ConfigurationReport& report) {
    std::string out = "{";
    put_report_fields(out, report);
    out += "}";
    return out;
}

ConfigurationReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ConfigurationReport r;
    r.cfg.T = j.at("T").get<double>();
    r.cfg.epsilon = j.at("epsilon").get<double>();
    r.cfg.l = j.at("l").get<int>();
    r.cfg.k = j.at("k").get<int>();
    r.cfg.c_hat = j.at("c_hat").get<double>();
    r.cfg.alpha0 = j.at("alpha0").get<double>();
    r.cfg.alphas = j.at("alphas").get<std::vector<double>>();
    r.cfg.betas = j.at("betas").get<std::vector<double>>();
    r.cfg.lhs = j.at("lhs").get<double>();
    r.cfg.rhs = j.at("rhs").get<double>();
    r.cfg.residual = j.at("residual").get<double>();
    r.mu_kbar = j.at("mu_kbar").get<double>();
    r.mean_0_alpha0 = j.at("mean_0_alpha0").get<double>();
    r.mean_mukbar_alpha0 = j.at("mean_mukbar_alpha0").get<double>();
    r.gaps_alpha = j.at("gaps_alpha").get<std::vector<double>>();
    r.gaps_beta = j.at("gaps_beta").get<std::vector<double>>();
    return r;
}

MetamorphosisDocument metamorphosis_report(const ConfigurationReport& report,
                                           const zeros::ZeroStore& store,
                                           const SearchParams& params) {
    const LadderConfiguration& cfg = report.cfg;
    MetamorphosisDocument doc;
    doc.report = report;
    doc.control_alpha.push_back(cfg.alpha0);
    doc.control_alpha.insert(doc.control_alpha.end(), cfg.alphas.begin(), cfg.alphas.end());
    doc.control_beta = cfg.betas;

    doc.inclusion_alpha_ok = true;
    for (std::size_t i = 0; i < doc.control_alpha.size(); ++i) {
        if (doc.control_alpha[i] <= cfg.T) doc.inclusion_alpha_ok = false;
        if (i > 0 && doc.control_alpha[i] <= doc.control_alpha[i - 1])
            doc.inclusion_alpha_ok = false;
    }
    doc.inclusion_beta_ok = true;
    for (std::size_t i = 0; i < doc.control_beta.size(); ++i) {
        if (doc.control_beta[i] <= cfg.T) doc.inclusion_beta_ok = false;
        if (i > 0 && doc.control_beta[i] <= doc.control_beta[i - 1])
            doc.inclusion_beta_ok = false;
    }

    double ln_q_raw = 0.0, env = 0.0;
    for (int r = 0; r < cfg.k; ++r) {
        const double a = cfg.alphas[static_cast<std::size_t>(r)];
        const double b = cfg.betas[static_cast<std::size_t>(r)];
        ln_q_raw += std::log(abs_z(a, rs::Correction::none)) -
                    std::log(abs_z(b, rs::Correction::none));
        for (const double t : {a, b}) {
            const double m = abs_z(t);
            const double bound = rs::remainder_envelope(t, rs::Correction::none) +
                                 rs::remainder_envelope(t, rs::Correction::c2);
            env += m > bound ? -std::log1p(-bound / m) : 1e6;
        }
    }
    doc.q_raw = std::exp(ln_q_raw);
    const double ln_s1_form = cfg.l * std::log(M_PI) + 0.5 * std::log(cfg.c_hat) -
                              cfg.l * std::log(M_PI * std::abs(argmod::S1(cfg.alpha0, store)));
    doc.q_via_s1 = std::exp(ln_s1_form);
    doc.q_gap_ln = std::abs(ln_q_raw - ln_s1_form);
    doc.q_envelope_ln = env;

    for (double scale : {1.0, 2.0, 4.0})
        doc.gap_table.emplace_back(scale * cfg.T, gap_law(scale * cfg.T));
    doc.k_rs = rs::measured_k_rs();
    doc.k_spec = rs::measure_k_spec({1e3, 3.2e3, 1e4, 3.2e4, 1e5}, 25).k_spec;
    doc.segment_width_rule = "segments carry the window width H";
    (void)params;
    return doc;
}

std::string to_json(const MetamorphosisDocument& doc) {
    std::string out = "{";
    put_report_fields(out, doc.report);
    out += ",";
    put_array(out, "control_alpha", doc.control_alpha);
    put_array(out, "control_beta", doc.control_beta);
    out += std::string("\"inclusion_alpha_ok\":") + (doc.inclusion_alpha_ok ? "true" : "false") +
           ",";
    out += std::string("\"inclusion_beta_ok\":") + (doc.inclusion_beta_ok ? "true" : "false") +
           ",";
    put_field(out, "q_raw", doc.q_raw);
    put_field(out, "q_via_s1", doc.q_via_s1);
    put_field(out, "q_gap_ln", doc.q_gap_ln);
    put_field(out, "q_envelope_ln", doc.q_envelope_ln);
    out += "\"gap_table\":[";
    for (std::size_t i = 0; i < doc.gap_table.size(); ++i) {
        if (i) out += ',';
        out += "[";
        put_number(out, doc.gap_table[i].first);
        out += ",";
        put_number(out, doc.gap_table[i].second);
        out += "]";
    }
    out += "],";
    put_field(out, "k_rs", doc.k_rs);
    put_field(out, "k_spec", doc.k_spec);
    out += "\"segment_width_rule\":\"" + doc.segment_width_rule + "\"}";
    return out;
}

}  // namespace zl::ladder
