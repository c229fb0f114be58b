#pragma once

// Segment chains following the gap law g(T) = (1-c) T / ln T, the
// constrained search for node configurations realizing the factorization
// identity, the oscillatory product over Z-ratios, and report emission.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zl/argmod.hpp"
#include "zl/moments.hpp"
#include "zl/zeros.hpp"

namespace zl::ladder {

inline constexpr int k_max = 8;
inline constexpr double euler_gamma = 0.5772156649015328606;

// Gap law between consecutive nodes.
double gap_law(double T);

struct SegmentChain {
    double T = 0.0;
    double epsilon = 0.0;
    double H = 0.0;
    double g = 0.0;       // gap_law(T)
    int k = 0;
    std::vector<std::pair<double, double>> segments;  // segment r = [lo, hi]
};

// Segment r is centered at T + r g(T) with width H; requires g(T) > H.
SegmentChain build_segments(double T, double epsilon, int k);

struct SearchParams {
    double z_floor = 1e-8;
    double delta_gap = 0.15;      // relative gap tolerance
    double residual_cap = 1e-3;
    long eval_budget = 100000;    // Z evaluations during the search
    std::uint64_t seed = 12345;
    int candidates_per_node = 160;
    int descent_sweeps = 3;
};

// Height where |S1| equals c_hat^(1/2l) inside (T, T+H): the window mean
// value realized at a concrete point, located by scan + bisection.
double choose_alpha0(double T, int l, const moments::MomentEstimate& est,
                     const argmod::RootList& roots, const zeros::ZeroStore& store);

// prod |Z(x_r)| / |Z(y_r)|; every node must clear z_floor.
double q_product(const std::vector<double>& xs, const std::vector<double>& ys,
                 double z_floor = 1e-8);

struct LadderConfiguration {
    double T = 0.0;
    double epsilon = 0.0;
    int l = 1;
    int k = 1;
    double c_hat = 0.0;
    double alpha0 = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;
    double lhs = 0.0;       // pi |S1(alpha0)|
    double rhs = 0.0;       // pi c_hat^(1/2l) prod^(-1/l)
    double residual = 0.0;  // |ln(lhs/rhs)|
};

// Thrown when no configuration reaches residual_cap; carries the best found.
struct search_failure : verification_error {
    LadderConfiguration best;
    search_failure(const std::string& msg, LadderConfiguration b)
        : verification_error(msg), best(std::move(b)) {}
};

LadderConfiguration search_configuration(double T, int l, double epsilon, int k,
                                         const moments::MomentEstimate& est,
                                         const argmod::RootList& roots,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params = {});

// Re-runs the local refinement stages on an existing configuration (for
// example after perturbing a node); alpha0 and c_hat are kept.
LadderConfiguration refine_configuration(const LadderConfiguration& cfg,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params = {});

// Re-checks every hard constraint from the raw numbers; empty when valid.
std::vector<std::string> validate_configuration(const LadderConfiguration& cfg,
                                                const SearchParams& params = {});

struct FactorizationReport {
    double lhs_s1 = 0.0;          // pi |S1(alpha0)|
    double lhs_reduced = 0.0;     // pi |int_{mu}^{alpha0} S|
    double mu_kbar = 0.0;
    double rhs_corrected = 0.0;   // Z-ratios at full correction depth
    double rhs_bare = 0.0;        // bare main sums only
    double bare_gap_ln = 0.0;     // |ln(rhs_bare / rhs_corrected)|
    double bare_envelope_ln = 0.0;
    double eq_product_gap = 0.0;  // product-form identity defect (log space)
    double signed_residual = 0.0; // ln lhs - ln rhs
    double mean_0_alpha0 = 0.0;
    double mean_mu_alpha0 = 0.0;
    double mean_ratio_defect = 0.0;
    bool ok = false;
};

// Runs the four internal equivalences; throws verification_error naming the
// first identity that misses its tolerance.
FactorizationReport verify_factorization(const LadderConfiguration& cfg,
                                         const argmod::RootList& roots,
                                         const zeros::ZeroStore& store,
                                         const SearchParams& params = {});

// The JSON report unit for a configuration.
struct ConfigurationReport {
    LadderConfiguration cfg;
    double mu_kbar = 0.0;
    double mean_0_alpha0 = 0.0;
    double mean_mukbar_alpha0 = 0.0;
    std::vector<double> gaps_alpha;
    std::vector<double> gaps_beta;
};

ConfigurationReport make_report(const LadderConfiguration& cfg, const argmod::RootList& roots,
                                const zeros::ZeroStore& store);

std::string to_json(const ConfigurationReport& report);
ConfigurationReport report_from_json(const std::string& text);

struct MetamorphosisDocument {
    ConfigurationReport report;
    std::vector<double> control_alpha;  // alpha0, alpha_1..alpha_k
    std::vector<double> control_beta;
    bool inclusion_alpha_ok = false;    // ordered, above T
    bool inclusion_beta_ok = false;
    double q_raw = 0.0;                 // bare oscillator-sum product
    double q_via_s1 = 0.0;              // pi^l sqrt(c_hat) (pi |S1(alpha0)|)^(-l)
    double q_gap_ln = 0.0;
    double q_envelope_ln = 0.0;
    std::vector<std::pair<double, double>> gap_table;  // (T, g) at T, 2T, 4T
    double k_rs = 0.0;    // measured bare-sum remainder constant
    double k_spec = 0.0;  // measured spectral-window constant
    std::string segment_width_rule;
};

MetamorphosisDocument metamorphosis_report(const ConfigurationReport& report,
                                           const zeros::ZeroStore& store,
                                           const SearchParams& params = {});

std::string to_json(const MetamorphosisDocument& doc);

}  // namespace zl::ladder
