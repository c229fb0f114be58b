#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "zl/rs.hpp"
#include "zl/zeros.hpp"

using zl::zeros::ScanOptions;
using zl::zeros::Source;
using zl::zeros::ZeroStore;

namespace {

ZeroStore store_from(const std::vector<double>& ords, double verified_to) {
    return ZeroStore::from_ordinates(std::vector<double>(ords), verified_to, Source::computed);
}

}  // namespace

TEST_CASE("scan (10, 15) finds exactly the first ordinate") {
    const auto found = zl::zeros::scan_range(10.0, 15.0);
    REQUIRE(found.size() == 1);
    CHECK(found[0] > 14.1);
    CHECK(found[0] < 14.2);
    const auto ref = oracles::load_column("zeros_first.txt");
    CHECK(std::abs(found[0] - ref[0]) < 1e-6);
}

TEST_CASE("scan (10, 100) finds 29 ordinates matching the reference table") {
    const auto found = zl::zeros::scan_range(10.0, 100.0);
    const auto ref = oracles::load_column("zeros_first.txt");
    REQUIRE(found.size() == 29);
    for (std::size_t i = 0; i < found.size(); ++i) CHECK(std::abs(found[i] - ref[i]) < 1e-6);
}

TEST_CASE("degenerate and inverted ranges are domain errors") {
    CHECK_THROWS_AS(zl::zeros::scan_range(20.0, 20.0), zl::domain_error);
    CHECK_THROWS_AS(zl::zeros::scan_range(20.0, 10.0), zl::domain_error);
    CHECK_THROWS_AS(zl::zeros::scan_range(5.0, 20.0), zl::domain_error);
}

TEST_CASE("scan separates the close pair above t = 7005") {
    const auto pair = oracles::load_column("zeros_close_pair.txt");
    const auto found = zl::zeros::scan_range(7000.0, 7010.0);
    int hits = 0;
    for (double g : found)
        for (double p : pair)
            if (std::abs(g - p) < 1e-6) ++hits;
    CHECK(hits == 2);
}

TEST_CASE("refinement stability: halving the grid moves nothing beyond 1e-9") {
    ScanOptions coarse;
    ScanOptions fine;
    fine.grid_factor = coarse.grid_factor / 2.0;
    const auto a = zl::zeros::scan_range(100.0, 250.0, coarse);
    const auto b = zl::zeros::scan_range(100.0, 250.0, fine);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
}

TEST_CASE("count_N uses the half-sum convention at ordinates") {
    const auto store = zl::zeros::scan_store(10.0, 100.0);
    const double g1 = store.ordinates()[0];
    CHECK(store.count_N(14.0) == 0.0);
    CHECK(store.count_N(g1) == 0.5);
    CHECK(store.count_N(g1 + 1e-6) == 1.0);
    CHECK(store.count_N(g1 - 1e-6) == 0.0);
    CHECK(store.count_N(100.0) == 29.0);
    CHECK_THROWS_AS(store.count_N(100.5), zl::out_of_range_error);
}

TEST_CASE("count matches the frozen N(t) table") {
    const auto store = zl::zeros::scan_store(10.0, 1000.0);
    for (const auto& [t, n] : oracles::load_pairs("zero_counts.txt")) {
        if (t > 1000.0) continue;
        CHECK(store.count_N(t) == n);
    }
}

TEST_CASE("verify_count accepts a fresh store and pinpoints tampering") {
    const auto store = zl::zeros::scan_store(10.0, 1000.0);
    zl::zeros::VerifyReport rep;
    CHECK(zl::zeros::verify_count(store, 1000.0, {}, &rep));
    CHECK(rep.max_abs_s < 3.0);
    CHECK(rep.max_drift < 0.75);

    std::vector<double> ords(store.ordinates().begin(), store.ordinates().end());
    SUBCASE("deleting an interior ordinate flips the check") {
        for (std::size_t victim : {std::size_t(0), ords.size() / 2, ords.size() - 1}) {
            std::vector<double> tampered = ords;
            tampered.erase(tampered.begin() + static_cast<std::ptrdiff_t>(victim));
            const auto bad = store_from(tampered, 1000.0);
            CAPTURE(victim);
            CHECK_FALSE(zl::zeros::verify_count(bad, 1000.0, {}, &rep));
        }
    }
    SUBCASE("a spurious extra ordinate flips the check") {
        std::vector<double> tampered = ords;
        tampered.insert(tampered.begin() + 100, 0.5 * (ords[99] + ords[100]));
        const auto bad = store_from(tampered, 1000.0);
        CHECK_FALSE(zl::zeros::verify_count(bad, 1000.0, {}, &rep));
    }
}

TEST_CASE("verify_count is true below the first ordinate") {
    const auto store = store_from({}, 12.0);
    CHECK(zl::zeros::verify_count(store, 12.0));
}

TEST_CASE("store invariants are validated") {
    CHECK_THROWS_AS(store_from({15.0, 15.0}, 20.0), zl::domain_error);
    CHECK_THROWS_AS(store_from({13.9}, 20.0), zl::domain_error);
    CHECK_THROWS_AS(store_from({21.0}, 20.0), zl::domain_error);
    CHECK_NOTHROW(store_from({14.134725, 21.022040}, 25.0));
}

TEST_CASE("import accepts plain lists and the v1 header") {
    SUBCASE("three-ordinate list") {
        std::istringstream in("14.134725\n21.022040\n25.010858\n");
        const auto store = zl::zeros::import_table(in);
        CHECK(store.size() == 3);
        CHECK(store.verified_to() == doctest::Approx(25.010858));
        CHECK(store.source() == Source::imported);
    }
    SUBCASE("v1 header fixes the watermark") {
        std::istringstream in("# zeta-zeros v1 verified_to=30.000000000\n14.134725141\n");
        const auto store = zl::zeros::import_table(in);
        CHECK(store.verified_to() == doctest::Approx(30.0));
    }
    SUBCASE("out-of-order rows name the offending line") {
        std::istringstream in("21.022040\n14.134725\n");
        try {
            zl::zeros::import_table(in);
            FAIL("expected ingestion_error");
        } catch (const zl::ingestion_error& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("garbage rows name the offending line") {
        std::istringstream in("14.134725\nnot-a-number\n");
        try {
            zl::zeros::import_table(in);
            FAIL("expected ingestion_error");
        } catch (const zl::ingestion_error& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("empty input gives an empty store with watermark 0") {
        std::istringstream in("");
        const auto store = zl::zeros::import_table(in);
        CHECK(store.size() == 0);
        CHECK(store.verified_to() == 0.0);
    }
}

TEST_CASE("store text round-trips through write and import") {
    const auto store = zl::zeros::scan_store(10.0, 100.0);
    std::ostringstream out;
    zl::zeros::write_store(store, out);
    std::istringstream in(out.str());
    const auto back = zl::zeros::import_table(in);
    REQUIRE(back.size() == store.size());
    for (std::size_t i = 0; i < back.size(); ++i)
        CHECK(std::abs(back.ordinates()[i] - store.ordinates()[i]) < 1e-9);
    CHECK(back.verified_to() == doctest::Approx(store.verified_to()).epsilon(1e-12));
}

TEST_CASE("imported fixtures agree with computed ordinates to 1e-6") {
    const auto computed = zl::zeros::scan_store(10.0, 101.0);
    std::ifstream in(oracles::data_path("zeros_first.txt"));
    std::ostringstream table;
    table << in.rdbuf();
    std::istringstream tin(table.str());
    const auto imported = zl::zeros::import_table(tin);
    const auto merged = zl::zeros::merge(computed, imported);
    // the union must not grow: every imported ordinate matches a computed one
    std::size_t within_overlap = 0;
    for (double g : merged.ordinates())
        if (g <= 101.0) ++within_overlap;
    CHECK(within_overlap == computed.size());
    CHECK(merged.source() == Source::merged);
    CHECK(zl::zeros::verify_count(merged, 101.0));
}

TEST_CASE("scan_store refuses an unanchored start") {
    CHECK_THROWS_AS(zl::zeros::scan_store(50.0, 100.0), zl::precondition_error);
}

TEST_CASE("serial and parallel scans agree bitwise") {
    ScanOptions ser;
    ser.parallel = false;
    ScanOptions par;
    par.parallel = true;
    const auto a = zl::zeros::scan_range(500.0, 600.0, ser);
    const auto b = zl::zeros::scan_range(500.0, 600.0, par);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}
