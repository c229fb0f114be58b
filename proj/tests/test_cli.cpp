#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(ZL_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int rc = pclose(pipe);
    r.exit_code = WEXITSTATUS(rc);
    return r;
}

std::filesystem::path work_dir() {
    static const std::filesystem::path p = [] {
        auto d = std::filesystem::temp_directory_path() / "zl_cli_tests";
        std::filesystem::create_directories(d);
        return d;
    }();
    return p;
}

// store covering the first root band of S1, shared by the ladder commands
std::string big_store_path() {
    static const std::string path = [] {
        const auto p = work_dir() / "store_81800.txt";
        if (!std::filesystem::exists(p)) {
            const auto r =
                run_cli("zeros scan 10 81800 --out " + p.string() + " > /dev/null");
            REQUIRE(r.exit_code == 0);
        }
        return p.string();
    }();
    return path;
}

std::string small_store_path() {
    static const std::string path = [] {
        const auto p = work_dir() / "store_1300.txt";
        if (!std::filesystem::exists(p)) {
            const auto r = run_cli("zeros scan 10 1300 --out " + p.string() + " > /dev/null");
            REQUIRE(r.exit_code == 0);
        }
        return p.string();
    }();
    return path;
}

}  // namespace

TEST_CASE("scalar commands print one number") {
    const auto z = run_cli("z 100");
    CHECK(z.exit_code == 0);
    CHECK(std::abs(std::stod(z.out) - 2.69269705666446) < 1e-6);

    const auto th = run_cli("theta 100");
    CHECK(th.exit_code == 0);
    CHECK(std::abs(std::stod(th.out) - 87.97216523178722) < 1e-9);
}

TEST_CASE("domain violations exit with 3, usage errors with 2") {
    CHECK(run_cli("z 5").exit_code == 3);
    CHECK(run_cli("z").exit_code == 2);
    CHECK(run_cli("zeros scan 20 10").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("z 100 --bogus-flag 1").exit_code == 2);
}

TEST_CASE("zeros scan emits the v1 store format") {
    const auto r = run_cli("zeros scan 10 50");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("# zeta-zeros v1 verified_to=50.000000000", 0) == 0);
    // 10 ordinates below 50, nine decimals each
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 11);
    CHECK(r.out.find("14.134725") != std::string::npos);
}

TEST_CASE("store-backed commands: s, s1, mean, roots") {
    const std::string store = small_store_path();
    const std::string flag = " --store " + store;

    const auto s = run_cli("s 1000" + flag);
    CHECK(s.exit_code == 0);
    CHECK(std::abs(std::stod(s.out)) < 2.0);

    const auto s1 = run_cli("s1 1000" + flag);
    CHECK(s1.exit_code == 0);
    CHECK(std::abs(std::stod(s1.out) - (-0.87714)) < 1e-3);

    const auto m = run_cli("mean 0 1000" + flag);
    CHECK(m.exit_code == 0);

    const auto roots = run_cli("s1 roots 50 900" + flag);
    CHECK(roots.exit_code == 0);
    CHECK(roots.out.rfind("mu,bracket_lo,bracket_hi", 0) == 0);

    SUBCASE("watermark shortfall exits 3") {
        CHECK(run_cli("s1 2000" + flag).exit_code == 3);
    }
    SUBCASE("no store configured exits 3") { CHECK(run_cli("s1 1000").exit_code == 3); }
    SUBCASE("environment variable supplies the store") {
        const auto r = run_cli("s1 1000", "ZETA_LADDERS_STORE=" + store);
        CHECK(r.exit_code == 0);
    }
    SUBCASE("config file supplies the store, flags win over it") {
        const auto cfg = work_dir() / "run.cfg";
        std::ofstream(cfg) << "zero_store_path=" << store << "\nepsilon=0.1\n";
        CHECK(run_cli("s1 1000 --config " + cfg.string()).exit_code == 0);
        const auto bad = work_dir() / "bad.cfg";
        std::ofstream(bad) << "who_knows=1\n";
        CHECK(run_cli("s1 1000 --config " + bad.string()).exit_code == 3);
    }
}

TEST_CASE("zeros verify and import") {
    const std::string store = small_store_path();
    const auto v = run_cli("zeros verify --store " + store);
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("\"ok\":true") != std::string::npos);

    const auto imp = run_cli("zeros import " + store);
    CHECK(imp.exit_code == 0);
    CHECK(imp.out.find("\"source\":\"imported\"") != std::string::npos);

    SUBCASE("tampered store fails verification with exit 4") {
        // drop one interior ordinate
        std::ifstream in(store);
        const auto broken = work_dir() / "broken.txt";
        std::ofstream out(broken);
        std::string line;
        int n = 0;
        while (std::getline(in, line))
            if (++n != 100) out << line << '\n';
        out.close();
        CHECK(run_cli("zeros verify --store " + broken.string()).exit_code == 4);
    }
    SUBCASE("unparsable ordinate exits 3") {
        const auto junk = work_dir() / "junk.txt";
        std::ofstream(junk) << "14.134725\nlattice\n";
        CHECK(run_cli("zeros import " + junk.string()).exit_code == 3);
    }
}

TEST_CASE("moments subcommands") {
    const std::string flag = " --store " + small_store_path();
    const auto sel = run_cli("moments selberg 1000 --l 1 --epsilon 0.1" + flag);
    CHECK(sel.exit_code == 0);
    CHECK(sel.out.rfind("T,epsilon,H,l,I,c_hat", 0) == 0);

    const auto hl = run_cli("moments hl 1000 200" + flag);
    CHECK(hl.exit_code == 0);
    const double ratio = std::stod(hl.out);
    CHECK(ratio > 0.5);
    CHECK(ratio < 1.5);
}

TEST_CASE("qsys subcommands") {
    const auto ident = run_cli("qsys eval --xs 100 --ys 100");
    CHECK(ident.exit_code == 0);
    CHECK(std::stod(ident.out) == 1.0);

    CHECK(run_cli("qsys eval --xs 100").exit_code == 2);

    const auto bank = run_cli("qsys bank 200");
    CHECK(bank.exit_code == 0);
    CHECK(bank.out.find("\"term_count\":5") != std::string::npos);

    const auto bank_csv = run_cli("qsys bank 200 --format csv");
    CHECK(bank_csv.exit_code == 0);
    CHECK(bank_csv.out.find("n,frequency,amplitude") != std::string::npos);

    const auto synth = run_cli("qsys synth 1000 5 9");
    CHECK(synth.exit_code == 0);
    CHECK(synth.out.rfind("t,spectral_z,rs_z,abs_diff", 0) == 0);
    int lines = 0;
    for (char c : synth.out)
        if (c == '\n') ++lines;
    CHECK(lines == 10);

    CHECK(run_cli("qsys synth 1000 50 5").exit_code == 3);  // window too wide
}

TEST_CASE("plotdata emits CSV samples") {
    const auto r = run_cli("plotdata s1 100 110 2 --store " + small_store_path());
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("t,s1", 0) == 0);
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 7);
}

TEST_CASE("ladder pipeline through the CLI") {
    const std::string flag = " --store " + big_store_path();

    const auto seg = run_cli("ladder segments 75500");
    CHECK(seg.exit_code == 0);
    CHECK(seg.out.find("\"segments\":[[") != std::string::npos);

    const auto search = run_cli("ladder search 75500" + flag);
    CHECK(search.exit_code == 0);
    CHECK(search.out.find("\"residual\":") != std::string::npos);
    CHECK(search.out.find("\"mu_kbar\":") != std::string::npos);

    SUBCASE("fixed seed reproduces the payload byte for byte") {
        const auto again = run_cli("ladder search 75500" + flag);
        CHECK(again.exit_code == 0);
        CHECK(again.out == search.out);
    }
    SUBCASE("thread count does not change the payload") {
        const auto t1 = run_cli("ladder search 75500" + flag, "OMP_NUM_THREADS=1");
        CHECK(t1.exit_code == 0);
        CHECK(t1.out == search.out);
    }
    SUBCASE("emitted reports re-verify") {
        const auto report = work_dir() / "report.json";
        std::ofstream(report) << search.out;
        const auto v = run_cli("ladder verify " + report.string() + flag);
        CHECK(v.exit_code == 0);
        CHECK(v.out.find("\"ok\":true") != std::string::npos);
    }
    SUBCASE("tampered reports are rejected") {
        std::string body = search.out;
        const auto pos = body.find("\"rhs\":");
        REQUIRE(pos != std::string::npos);
        const auto stop = body.find(',', pos);
        body.replace(pos, stop - pos, "\"rhs\":9.9e+00");
        const auto bad = work_dir() / "bad_report.json";
        std::ofstream(bad) << body;
        CHECK(run_cli("ladder verify " + bad.string() + flag).exit_code == 4);
    }
    SUBCASE("metamorphosis report carries the control functions") {
        const auto rep = run_cli("ladder report 75500" + flag);
        CHECK(rep.exit_code == 0);
        CHECK(rep.out.find("\"control_alpha\":") != std::string::npos);
        CHECK(rep.out.find("\"gap_table\":") != std::string::npos);
        CHECK(rep.out.find("\"inclusion_alpha_ok\":true") != std::string::npos);
    }
    SUBCASE("heights below the first root band name the obstruction") {
        const auto r = run_cli("ladder search 10000" + flag);
        CHECK(r.exit_code == 3);
    }
}
