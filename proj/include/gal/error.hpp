#pragma once

#include <stdexcept>

namespace gal {

// Malformed input file (bad magic, truncation, non-finite value, ...).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An estimation step failed on degenerate data (e.g. RANSAC never saw a
// usable sample).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gal
