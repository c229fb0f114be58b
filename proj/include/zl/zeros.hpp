#pragma once

// Locating, verifying, persisting and importing zero ordinates on the
// critical line, plus the exact counting function N(t) built on them.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zl/errors.hpp"

namespace zl::zeros {

enum class Source { computed, imported, merged };

// Immutable, strictly increasing list of verified ordinates with a
// watermark.  A store always represents *all* zeros up to the watermark
// (the first ordinate exceeds 14, so anchoring at 0 is implicit).
class ZeroStore {
  public:
    static ZeroStore from_ordinates(std::vector<double> ordinates, double verified_to,
                                    Source source);

    std::span<const double> ordinates() const { return ordinates_; }
    double verified_to() const { return verified_to_; }
    Source source() const { return source_; }
    std::size_t size() const { return ordinates_.size(); }

    // #{gamma <= t}; no watermark check (internal building block).
    std::size_t count_below(double t) const;

    // Counting function with the half-sum convention at ordinates
    // (within 1e-9).  Throws out_of_range_error beyond the watermark.
    double count_N(double t) const;

    // Compensated sum of the first n ordinates.
    long double ordinate_prefix(std::size_t n) const;

    void require_covers(double t, const char* what) const;

  private:
    ZeroStore() = default;
    std::vector<double> ordinates_;
    std::vector<long double> prefix_;
    double verified_to_ = 0.0;
    Source source_ = Source::computed;
};

struct ScanOptions {
    double grid_factor = 0.5;       // initial grid spacing = grid_factor / ln t
    int max_halvings = 14;
    double refine_tol = 1e-9;       // bisection width target
    double margin = 60.0;           // extra span scanned beyond hi for verification
    int checkpoints = 100;          // pointwise mesh size for verify_count
    double s_cap = 3.0;             // |S| cap at checkpoints
    double drift_cap = 0.75;        // cap on windowed mean of S
    double drift_window_min = 20.0; // minimum drift-window width
    double z_floor = 1e-8;          // sign probes below this are inconclusive
    bool parallel = true;
};

struct VerifyReport {
    bool ok = true;
    std::string failure;      // empty when ok
    double failure_lo = 0.0;  // suspect subinterval
    double failure_hi = 0.0;
    double max_abs_s = 0.0;
    double max_drift = 0.0;
    std::size_t parity_pairs = 0;
};

// All sign-change ordinates of Z in (t_lo, t_hi], bisected to refine_tol,
// grid adaptively halved until the consistency checks pass on the range.
std::vector<double> scan_range(double t_lo, double t_hi, const ScanOptions& opts = {});

// Scans from below the first zero and returns a store verified to t_hi.
// t_lo must not exceed 14 so that completeness from 0 is structural.
ZeroStore scan_store(double t_lo, double t_hi, const ScanOptions& opts = {});

// Turing-style completeness check over [0, t]: pointwise |S| cap at a mesh
// of checkpoints, windowed S-drift caps, and sign alternation of Z between
// consecutive ordinates.  False pinpoints the first failing location.
bool verify_count(const ZeroStore& store, double t, const ScanOptions& opts = {},
                  VerifyReport* report = nullptr);

ZeroStore import_table(const std::filesystem::path& path);
ZeroStore import_table(std::istream& in);

void write_store(const ZeroStore& store, std::ostream& out);
void write_store(const ZeroStore& store, const std::filesystem::path& path);

// Union of ordinates (duplicates within 5e-9 collapse); caller re-verifies.
ZeroStore merge(const ZeroStore& a, const ZeroStore& b);

}  // namespace zl::zeros
