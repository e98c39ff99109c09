#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace minshare {

struct Trajectory;

// Experiment-spec problems: unknown keys, missing fields, malformed values.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem problems: unreadable inputs, unwritable outputs.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failures inside generation or simulation: exhausted attempt budgets,
// numerical degeneracy. run() attaches whatever trajectory was recorded
// before the failing round.
struct EngineError : std::runtime_error {
    explicit EngineError(const std::string& what_arg) : std::runtime_error(what_arg) {}
    std::shared_ptr<const Trajectory> partial_trajectory;
};

}  // namespace minshare
