// Command-line surface for the critical-line toolkit.
//
// Exit codes: 0 success, 2 usage error, 3 domain/precondition error,
// 4 verification failure.  Machine-readable payload goes to stdout,
// human-readable diagnostics to stderr.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zl/argmod.hpp"
#include "zl/config.hpp"
#include "zl/errors.hpp"
#include "zl/ladder.hpp"
#include "zl/moments.hpp"
#include "zl/parallel.hpp"
#include "zl/rs.hpp"
#include "zl/zeros.hpp"

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* usage_text = R"(usage: zeta-ladders [options] <command> [args]

commands:
  z <t>                         Z(t) via the Riemann-Siegel main sum
  theta <t>                     the phase theta(t)
  zeros scan <lo> <hi>          locate and verify zero ordinates
  zeros verify                  re-verify the configured store
  zeros import <path>           validate and summarize an ordinate table
  s <t>                         argument function S(t)
  s1 <T>                        integral of S over [0, T]
  s1 roots <lo> <hi>            odd-order roots of S1
  mean <a> <b>                  mean of arg zeta(1/2+it) over [a, b]
  moments selberg <T>           window moment of S1^(2l), CSV row
  moments hl <T> <U>            second-moment calibration of |Z|
  qsys eval --xs .. --ys ..     product of |Z(x_r)/Z(y_r)|
  qsys bank <x>                 local oscillator bank at base x
  qsys synth <x> <V> <n>        spectral synthesis vs direct evaluation
  ladder segments <T>           segment chain under the gap law
  ladder search <T>             search a factorization configuration
  ladder verify <report.json>   re-validate an emitted configuration
  ladder report <T>             full metamorphosis document
  plotdata s1 <lo> <hi> <step>  CSV samples of S1

options:
  --store <path>      zero-store file (or ZETA_LADDERS_STORE, or config file)
  --config <path>     key=value config file
  --out <path>        also write the payload to a file (scan/import)
  --format json|csv   output format where both exist
  --threads <n>  --seed <n>  --epsilon <x>  --l <n>  --k <n>
  --z-floor <x>  --delta-gap <x>  --residual-cap <x>
)";

struct Cli {
    zl::config::RunConfig cfg;
    std::vector<std::string> pos;
    std::string out_path;
};

double parse_num(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw usage_error(std::string("expected a number for ") + what + ", got '" + s + "'");
    return v;
}

long parse_int(const std::string& s, const char* what) {
    const double v = parse_num(s, what);
    if (v != static_cast<long>(v))
        throw usage_error(std::string("expected an integer for ") + what);
    return static_cast<long>(v);
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_num(item, what));
    if (out.empty()) throw usage_error(std::string("empty list for ") + what);
    return out;
}

Cli parse_args(int argc, char** argv, std::vector<double>& xs, std::vector<double>& ys) {
    Cli cli;
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::string>> flag_overrides;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        auto need_value = [&](const char* name) -> std::string {
            if (i + 1 >= argc) throw usage_error(std::string(name) + " needs a value");
            return argv[++i];
        };
        if (a == "--help" || a == "-h") {
            std::cout << usage_text;
            std::exit(0);
        } else if (a == "--config") {
            config_path = need_value("--config");
        } else if (a == "--store" || a == "--threads" || a == "--seed" || a == "--epsilon" ||
                   a == "--l" || a == "--k" || a == "--z-floor" || a == "--delta-gap" ||
                   a == "--residual-cap" || a == "--format") {
            flag_overrides.emplace_back(a, need_value(a.c_str()));
        } else if (a == "--out") {
            cli.out_path = need_value("--out");
        } else if (a == "--xs") {
            xs = parse_list(need_value("--xs"), "--xs");
        } else if (a == "--ys") {
            ys = parse_list(need_value("--ys"), "--ys");
        } else if (!a.empty() && a[0] == '-' && a.size() > 1 && !std::isdigit(a[1]) &&
                   a[1] != '.') {
            throw usage_error("unknown option " + a);
        } else {
            cli.pos.push_back(a);
        }
    }
    if (config_path) cli.cfg = zl::config::load_file(*config_path, cli.cfg);
    zl::config::apply_env(cli.cfg);
    for (const auto& [key, val] : flag_overrides) {
        if (key == "--store")
            cli.cfg.zero_store_path = val;
        else if (key == "--threads")
            cli.cfg.threads = static_cast<int>(parse_int(val, "--threads"));
        else if (key == "--seed")
            cli.cfg.seed = static_cast<std::uint64_t>(parse_int(val, "--seed"));
        else if (key == "--epsilon")
            cli.cfg.epsilon = parse_num(val, "--epsilon");
        else if (key == "--l")
            cli.cfg.l = static_cast<int>(parse_int(val, "--l"));
        else if (key == "--k")
            cli.cfg.k = static_cast<int>(parse_int(val, "--k"));
        else if (key == "--z-floor")
            cli.cfg.z_floor = parse_num(val, "--z-floor");
        else if (key == "--delta-gap")
            cli.cfg.delta_gap = parse_num(val, "--delta-gap");
        else if (key == "--residual-cap")
            cli.cfg.residual_cap = parse_num(val, "--residual-cap");
        else if (key == "--format")
            cli.cfg.out_format =
                val == "csv" ? zl::config::OutFormat::csv : zl::config::OutFormat::json;
    }
    cli.cfg.validate();
    if (cli.cfg.threads > 0) zl::par::set_threads(cli.cfg.threads);
    return cli;
}

zl::zeros::ZeroStore load_store(const Cli& cli) {
    if (cli.cfg.zero_store_path.empty())
        throw zl::domain_error(
            "no zero store configured; pass --store, set ZETA_LADDERS_STORE, or put "
            "zero_store_path in the config file");
    return zl::zeros::import_table(std::filesystem::path(cli.cfg.zero_store_path));
}

void print_scalar(double v) { std::printf("%.15g\n", v); }

zl::ladder::SearchParams search_params(const Cli& cli) {
    zl::ladder::SearchParams p;
    p.z_floor = cli.cfg.z_floor;
    p.delta_gap = cli.cfg.delta_gap;
    p.residual_cap = cli.cfg.residual_cap;
    p.seed = cli.cfg.seed;
    return p;
}

// Roots of S1 around alpha0 wide enough for the reduced integral.
zl::argmod::RootList roots_around(double T, double H, const Cli& cli,
                                  const zl::zeros::ZeroStore& store) {
    bool has_below = false, has_above = false;
    for (double w = 200.0; w <= 6400.0; w *= 2.0) {
        const double lo = std::max(zl::rs::t_min, T - w);
        const double hi = std::min(store.verified_to(), T + H + w);
        zl::argmod::RootList roots = zl::argmod::find_mu_roots(lo, hi, store);
        has_below = has_above = false;
        for (double mu : roots.roots) {
            has_below |= mu < T;
            has_above |= mu > T + H;
        }
        if (has_below && has_above) return roots;
        if (hi >= store.verified_to() && lo <= zl::rs::t_min) break;
    }
    throw zl::precondition_error(
        std::string("no odd-order root of S1 ") +
        (has_below ? "above the window within the verified range"
                   : "below the window; S1 stays negative at low heights and its first "
                     "roots sit near t = 55104, 63752 and 74956 - choose T above them") +
        " (T = " + std::to_string(T) + ")");
}

struct Pipeline {
    zl::moments::MomentEstimate est;
    zl::argmod::RootList roots;
    zl::ladder::LadderConfiguration cfg;
    zl::ladder::ConfigurationReport report;
};

Pipeline run_pipeline(double T, const Cli& cli, const zl::zeros::ZeroStore& store) {
    Pipeline p{zl::moments::selberg_moment(T, cli.cfg.l, cli.cfg.epsilon, store),
               roots_around(T, std::pow(T, 0.5 + cli.cfg.epsilon), cli, store),
               {},
               {}};
    p.cfg = zl::ladder::search_configuration(T, cli.cfg.l, cli.cfg.epsilon, cli.cfg.k, p.est,
                                             p.roots, store, search_params(cli));
    p.report = zl::ladder::make_report(p.cfg, p.roots, store);
    return p;
}

void maybe_write_out(const Cli& cli, const std::string& payload) {
    if (cli.out_path.empty()) return;
    std::ofstream out(cli.out_path);
    if (!out) throw zl::domain_error("cannot write " + cli.out_path);
    out << payload;
}

int dispatch(const Cli& cli, const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto& pos = cli.pos;
    auto want = [&](std::size_t n, const char* grammar) {
        if (pos.size() != n) throw usage_error(std::string("usage: zeta-ladders ") + grammar);
    };

    if (pos.empty()) throw usage_error("no command given; try --help");
    const std::string& cmd = pos[0];

    if (cmd == "z") {
        want(2, "z <t>");
        print_scalar(zl::rs::rs_Z(zl::rs::CriticalT(parse_num(pos[1], "t"))));
        return 0;
    }
    if (cmd == "theta") {
        want(2, "theta <t>");
        print_scalar(zl::rs::theta(zl::rs::CriticalT(parse_num(pos[1], "t"))));
        return 0;
    }
    if (cmd == "zeros") {
        if (pos.size() >= 2 && pos[1] == "scan") {
            want(4, "zeros scan <lo> <hi>");
            const double lo = parse_num(pos[2], "lo"), hi = parse_num(pos[3], "hi");
            if (!(lo < hi)) throw usage_error("zeros scan needs lo < hi");
            std::ostringstream payload;
            if (lo <= 14.0) {
                zl::zeros::ZeroStore store = zl::zeros::scan_store(lo, hi);
                zl::zeros::write_store(store, payload);
            } else {
                char buf[64];
                for (double g : zl::zeros::scan_range(lo, hi)) {
                    std::snprintf(buf, sizeof buf, "%.9f\n", g);
                    payload << buf;
                }
            }
            std::cout << payload.str();
            maybe_write_out(cli, payload.str());
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "verify") {
            want(2, "zeros verify");
            zl::zeros::ZeroStore store = load_store(cli);
            zl::zeros::VerifyReport rep;
            const bool ok = zl::zeros::verify_count(store, store.verified_to(), {}, &rep);
            std::printf("{\"ok\":%s,\"checked_to\":%.9f,\"max_abs_s\":%.6g,"
                        "\"max_drift\":%.6g,\"parity_pairs\":%zu,\"failure\":\"%s\"}\n",
                        ok ? "true" : "false", store.verified_to(), rep.max_abs_s,
                        rep.max_drift, rep.parity_pairs, rep.failure.c_str());
            if (!ok) throw zl::verification_error(rep.failure, rep.failure_lo, rep.failure_hi);
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "import") {
            want(3, "zeros import <path>");
            zl::zeros::ZeroStore store = zl::zeros::import_table(std::filesystem::path(pos[2]));
            std::printf("{\"count\":%zu,\"verified_to\":%.9f,\"source\":\"imported\"}\n",
                        store.size(), store.verified_to());
            if (!cli.out_path.empty()) {
                std::ostringstream payload;
                zl::zeros::write_store(store, payload);
                maybe_write_out(cli, payload.str());
            }
            return 0;
        }
        throw usage_error("usage: zeta-ladders zeros scan|verify|import ...");
    }
    if (cmd == "s") {
        want(2, "s <t>");
        zl::zeros::ZeroStore store = load_store(cli);
        print_scalar(zl::argmod::S(parse_num(pos[1], "t"), store));
        return 0;
    }
    if (cmd == "s1") {
        if (pos.size() >= 2 && pos[1] == "roots") {
            want(4, "s1 roots <lo> <hi>");
            zl::zeros::ZeroStore store = load_store(cli);
            zl::argmod::RootList roots = zl::argmod::find_mu_roots(
                parse_num(pos[2], "lo"), parse_num(pos[3], "hi"), store);
            std::printf("mu,bracket_lo,bracket_hi\n");
            for (std::size_t i = 0; i < roots.roots.size(); ++i)
                std::printf("%.12f,%.12f,%.12f\n", roots.roots[i], roots.brackets[i].first,
                            roots.brackets[i].second);
            return 0;
        }
        want(2, "s1 <T>");
        zl::zeros::ZeroStore store = load_store(cli);
        print_scalar(zl::argmod::S1(parse_num(pos[1], "T"), store));
        return 0;
    }
    if (cmd == "mean") {
        want(3, "mean <a> <b>");
        zl::zeros::ZeroStore store = load_store(cli);
        print_scalar(zl::argmod::mean_arg(parse_num(pos[1], "a"), parse_num(pos[2], "b"), store));
        return 0;
    }
    if (cmd == "moments") {
        if (pos.size() >= 2 && pos[1] == "selberg") {
            want(3, "moments selberg <T> [--l n] [--epsilon x]");
            zl::zeros::ZeroStore store = load_store(cli);
            const auto est = zl::moments::selberg_moment(parse_num(pos[2], "T"), cli.cfg.l,
                                                         cli.cfg.epsilon, store);
            std::printf("T,epsilon,H,l,I,c_hat\n");
            std::printf("%.6f,%.6f,%.12g,%d,%.12g,%.12g\n", est.T, est.epsilon, est.H, est.l,
                        est.integral, est.c_hat);
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "hl") {
            want(4, "moments hl <T> <U>");
            zl::zeros::ZeroStore store = load_store(cli);
            print_scalar(zl::moments::hl_second_moment(parse_num(pos[2], "T"),
                                                       parse_num(pos[3], "U"), store));
            return 0;
        }
        throw usage_error("usage: zeta-ladders moments selberg|hl ...");
    }
    if (cmd == "qsys") {
        if (pos.size() >= 2 && pos[1] == "eval") {
            want(2, "qsys eval --xs a,b,.. --ys c,d,..");
            if (xs.empty() || ys.empty()) throw usage_error("qsys eval needs --xs and --ys");
            print_scalar(zl::ladder::q_product(xs, ys, cli.cfg.z_floor));
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "bank") {
            want(3, "qsys bank <x>");
            const auto bank = zl::rs::make_bank(zl::rs::CriticalT(parse_num(pos[2], "x")));
            if (cli.cfg.out_format == zl::config::OutFormat::csv) {
                std::printf("# base=%.9f term_count=%d phase_const=%.12g remainder_bound=%.6g\n",
                            bank.base, bank.term_count, bank.phase_const, bank.remainder_bound);
                std::printf("n,frequency,amplitude\n");
                for (int n = 1; n <= bank.term_count; ++n)
                    std::printf("%d,%.15g,%.15g\n", n,
                                bank.frequencies[static_cast<std::size_t>(n - 1)],
                                bank.amplitudes[static_cast<std::size_t>(n - 1)]);
            } else {
                std::string out = "{";
                char buf[64];
                std::snprintf(buf, sizeof buf, "\"base\":%.16e,", bank.base);
                out += buf;
                out += "\"term_count\":" + std::to_string(bank.term_count) + ",";
                std::snprintf(buf, sizeof buf, "\"phase_const\":%.16e,", bank.phase_const);
                out += buf;
                std::snprintf(buf, sizeof buf, "\"remainder_bound\":%.16e,",
                              bank.remainder_bound);
                out += buf;
                auto arr = [&](const char* key, const std::vector<double>& v, bool comma) {
                    out += std::string("\"") + key + "\":[";
                    for (std::size_t i = 0; i < v.size(); ++i) {
                        if (i) out += ',';
                        std::snprintf(buf, sizeof buf, "%.16e", v[i]);
                        out += buf;
                    }
                    out += "]";
                    if (comma) out += ',';
                };
                arr("frequencies", bank.frequencies, true);
                arr("amplitudes", bank.amplitudes, false);
                out += "}";
                std::printf("%s\n", out.c_str());
            }
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "synth") {
            want(5, "qsys synth <x> <V> <n>");
            const double x = parse_num(pos[2], "x"), v = parse_num(pos[3], "V");
            const long n = parse_int(pos[4], "n");
            if (n < 2) throw usage_error("qsys synth needs n >= 2");
            const auto bank = zl::rs::make_bank(zl::rs::CriticalT(x));
            std::printf("t,spectral_z,rs_z,abs_diff\n");
            for (long i = 0; i < n; ++i) {
                const double t = x + v * static_cast<double>(i) / static_cast<double>(n - 1);
                const double sp = zl::rs::spectral_Z(bank, t);
                const double zz = zl::rs::rs_Z(zl::rs::CriticalT(t));
                std::printf("%.12f,%.15g,%.15g,%.6g\n", t, sp, zz, std::abs(sp - zz));
            }
            return 0;
        }
        throw usage_error("usage: zeta-ladders qsys eval|bank|synth ...");
    }
    if (cmd == "ladder") {
        if (pos.size() >= 2 && pos[1] == "segments") {
            want(3, "ladder segments <T>");
            const auto chain = zl::ladder::build_segments(parse_num(pos[2], "T"),
                                                          cli.cfg.epsilon, cli.cfg.k);
            std::string out = "{";
            char buf[120];
            std::snprintf(buf, sizeof buf, "\"T\":%.16e,\"epsilon\":%.16e,\"H\":%.16e,", chain.T,
                          chain.epsilon, chain.H);
            out += buf;
            std::snprintf(buf, sizeof buf, "\"g\":%.16e,", chain.g);
            out += buf;
            out += "\"k\":" + std::to_string(chain.k) + ",\"segments\":[";
            for (std::size_t i = 0; i < chain.segments.size(); ++i) {
                if (i) out += ',';
                std::snprintf(buf, sizeof buf, "[%.16e,%.16e]", chain.segments[i].first,
                              chain.segments[i].second);
                out += buf;
            }
            out += "]}";
            std::printf("%s\n", out.c_str());
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "search") {
            want(3, "ladder search <T>");
            zl::zeros::ZeroStore store = load_store(cli);
            const Pipeline p = run_pipeline(parse_num(pos[2], "T"), cli, store);
            std::printf("%s\n", zl::ladder::to_json(p.report).c_str());
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "verify") {
            want(3, "ladder verify <report.json>");
            std::ifstream in(pos[2]);
            if (!in) throw zl::domain_error("cannot open report " + pos[2]);
            std::stringstream ss;
            ss << in.rdbuf();
            const auto report = zl::ladder::report_from_json(ss.str());
            zl::zeros::ZeroStore store = load_store(cli);
            const auto bad = zl::ladder::validate_configuration(report.cfg, search_params(cli));
            if (!bad.empty()) throw zl::verification_error("hard constraint: " + bad.front());
            const auto roots = roots_around(report.cfg.T,
                                            std::pow(report.cfg.T, 0.5 + report.cfg.epsilon),
                                            cli, store);
            const auto fact =
                zl::ladder::verify_factorization(report.cfg, roots, store, search_params(cli));
            std::printf("{\"ok\":true,\"lhs_s1\":%.16e,\"lhs_reduced\":%.16e,"
                        "\"rhs_corrected\":%.16e,\"rhs_bare\":%.16e,\"bare_gap_ln\":%.6g,"
                        "\"bare_envelope_ln\":%.6g,\"eq_product_gap\":%.6g,"
                        "\"signed_residual\":%.16e,\"mean_ratio_defect\":%.6g}\n",
                        fact.lhs_s1, fact.lhs_reduced, fact.rhs_corrected, fact.rhs_bare,
                        fact.bare_gap_ln, fact.bare_envelope_ln, fact.eq_product_gap,
                        fact.signed_residual, fact.mean_ratio_defect);
            return 0;
        }
        if (pos.size() >= 2 && pos[1] == "report") {
            want(3, "ladder report <T>");
            zl::zeros::ZeroStore store = load_store(cli);
            const Pipeline p = run_pipeline(parse_num(pos[2], "T"), cli, store);
            const auto doc =
                zl::ladder::metamorphosis_report(p.report, store, search_params(cli));
            std::printf("%s\n", zl::ladder::to_json(doc).c_str());
            return 0;
        }
        throw usage_error("usage: zeta-ladders ladder segments|search|verify|report ...");
    }
    if (cmd == "plotdata") {
        if (pos.size() >= 2 && pos[1] == "s1") {
            want(5, "plotdata s1 <lo> <hi> <step>");
            const double lo = parse_num(pos[2], "lo"), hi = parse_num(pos[3], "hi"),
                         step = parse_num(pos[4], "step");
            if (!(step > 0.0) || !(lo < hi)) throw usage_error("plotdata needs lo < hi, step > 0");
            zl::zeros::ZeroStore store = load_store(cli);
            const std::size_t n = static_cast<std::size_t>((hi - lo) / step) + 1;
            std::vector<double> vals(n);
            zl::par::for_each_index(n, [&](std::size_t i) {
                vals[i] = zl::argmod::S1(lo + step * static_cast<double>(i), store);
            });
            std::printf("t,s1\n");
            for (std::size_t i = 0; i < n; ++i)
                std::printf("%.9f,%.15g\n", lo + step * static_cast<double>(i), vals[i]);
            return 0;
        }
        throw usage_error("usage: zeta-ladders plotdata s1 <lo> <hi> <step>");
    }
    throw usage_error("unknown command '" + cmd + "'; try --help");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<double> xs, ys;
    try {
        const Cli cli = parse_args(argc, argv, xs, ys);
        return dispatch(cli, xs, ys);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const zl::verification_error& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return 4;
    } catch (const zl::ingestion_error& e) {
        std::fprintf(stderr, "error at line %zu: %s\n", e.line, e.what());
        return 3;
    } catch (const zl::out_of_range_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const zl::window_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const zl::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const zl::precondition_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
