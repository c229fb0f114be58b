#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zl {

// Input outside the mathematical domain of an operation (t below the
// supported height, inverted ranges, ...).  CLI exit code 3.
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request beyond the verified watermark of a zero store.  CLI exit code 3.
struct out_of_range_error : std::runtime_error {
    double required = 0.0;
    out_of_range_error(const std::string& msg, double required_height)
        : std::runtime_error(msg), required(required_height) {}
};

// A documented precondition of an operation failed.  CLI exit code 3.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation outside the validity window of a local spectral expansion.
struct window_error : std::runtime_error {
    double admissible_v = 0.0;
    window_error(const std::string& msg, double admissible)
        : std::runtime_error(msg), admissible_v(admissible) {}
};

// Unparsable or non-monotone input file.  Carries the 1-based line number.
struct ingestion_error : std::runtime_error {
    std::size_t line = 0;
    ingestion_error(const std::string& msg, std::size_t line_no)
        : std::runtime_error(msg), line(line_no) {}
};

// A consistency or completeness check failed.  Carries the suspect
// subinterval when one is known.  CLI exit code 4.
struct verification_error : std::runtime_error {
    double lo = 0.0;
    double hi = 0.0;
    explicit verification_error(const std::string& msg, double lo_ = 0.0, double hi_ = 0.0)
        : std::runtime_error(msg), lo(lo_), hi(hi_) {}
};

}  // namespace zl
