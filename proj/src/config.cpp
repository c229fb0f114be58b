#include "zl/config.hpp"

#include <cstdlib>
#include <fstream>

#include "zl/errors.hpp"
#include "zl/ladder.hpp"

namespace zl::config {

void RunConfig::validate() const {
    if (threads < 0) throw domain_error("threads must be >= 1");
    if (!(epsilon > 0.0) || epsilon > 0.2) throw domain_error("epsilon must lie in (0, 0.2]");
    if (l < 1 || l > 4) throw domain_error("l must lie in [1, 4]");
    if (k < 1 || k > ladder::k_max)
        throw domain_error("k must lie in [1, " + std::to_string(ladder::k_max) + "]");
    if (!(z_floor > 0.0) || z_floor > 1e-3) throw domain_error("z_floor must lie in (0, 1e-3]");
    if (!(delta_gap > 0.0) || delta_gap > 0.5)
        throw domain_error("delta_gap must lie in (0, 0.5]");
    if (!(residual_cap > 0.0) || residual_cap > 1.0)
        throw domain_error("residual_cap must lie in (0, 1]");
}

RunConfig load_file(const std::filesystem::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ingestion_error("config line is not key=value: " + line, line_no);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        try {
            if (key == "zero_store_path")
                base.zero_store_path = val;
            else if (key == "threads")
                base.threads = std::stoi(val);
            else if (key == "out_format")
                base.out_format = val == "csv" ? OutFormat::csv : OutFormat::json;
            else if (key == "epsilon")
                base.epsilon = std::stod(val);
            else if (key == "l")
                base.l = std::stoi(val);
            else if (key == "k")
                base.k = std::stoi(val);
            else if (key == "seed")
                base.seed = static_cast<std::uint64_t>(std::stoull(val));
            else if (key == "z_floor")
                base.z_floor = std::stod(val);
            else if (key == "delta_gap")
                base.delta_gap = std::stod(val);
            else if (key == "residual_cap")
                base.residual_cap = std::stod(val);
            else
                throw ingestion_error("unknown config key '" + key + "'", line_no);
        } catch (const ingestion_error&) {
            throw;
        } catch (const std::exception&) {
            throw ingestion_error("bad value for config key '" + key + "'", line_no);
        }
    }
    return base;
}

void apply_env(RunConfig& cfg) {
    if (const char* p = std::getenv("ZETA_LADDERS_STORE")) {
        if (*p) cfg.zero_store_path = p;
    }
}

}  // namespace zl::config
