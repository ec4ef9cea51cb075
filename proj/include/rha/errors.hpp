#pragma once

#include <stdexcept>
#include <string>

namespace rha {

// Error taxonomy mirrors the CLI exit codes:
//   config_error -> 2, budget_error -> 3, invariant_error -> 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, out-of-range parameters, invalid schedules.
struct config_error : error {
    using error::error;
};

// A requested computation exceeds an enumeration/memory/collision budget.
struct budget_error : error {
    using error::error;
};

// Internal consistency check failed; indicates a bug, not bad input.
struct invariant_error : error {
    using error::error;
};

} // namespace rha
