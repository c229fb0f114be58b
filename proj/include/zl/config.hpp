#pragma once

// Run configuration shared by the CLI subcommands: store path, thread
// count, output format, search knobs.  Sources in increasing precedence:
// defaults, config file, ZETA_LADDERS_STORE, command-line flags.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace zl::config {

enum class OutFormat { json, csv };

struct RunConfig {
    std::string zero_store_path;
    int threads = 0;  // 0 = library default
    OutFormat out_format = OutFormat::json;
    double epsilon = 0.1;
    int l = 1;
    int k = 2;
    std::uint64_t seed = 12345;
    double z_floor = 1e-8;
    double delta_gap = 0.15;
    double residual_cap = 1e-3;

    void validate() const;  // throws domain_error on out-of-range values
};

// Parses a flat key=value file; unknown keys are rejected.
RunConfig load_file(const std::filesystem::path& path, RunConfig base = {});

// Applies the ZETA_LADDERS_STORE environment override.
void apply_env(RunConfig& cfg);

}  // namespace zl::config
