#pragma once

#include <stdexcept>
#include <string>

namespace salad {

/// Unknown MCS index, unresolvable (mcs, cbs) pair, or similar table miss.
struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Curve fitting failed (degenerate input, non-finite loss).
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid scenario, table, or tuning configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File read/write failure.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace salad
