#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "minshare/experiment_spec.hpp"

namespace minshare {

struct RunOptions {
    std::filesystem::path out_override;  // empty: spec's output directory
    std::optional<std::uint64_t> seed_override;  // replaces the spec's first seed
    bool quiet = false;
};

// Per seed: trajectory CSV, metrics CSV, run manifest. Returns 0; failures
// surface as typed exceptions mapped to exit codes by the CLI.
int cmd_run(const ExperimentSpec& spec, const RunOptions& opts);

// Runs full, partial_previous and partial_own on identical instances and
// observation draws per seed; writes a combined per-seed CSV plus two SVGs
// (belief evolution on the true hypothesis; rejection rate of a selected
// false hypothesis with the network KL bound as reference line).
int cmd_compare(const ExperimentSpec& spec, const RunOptions& opts);

// Prints strong-connectivity and identifiability verdicts and the table of
// network-wide KL bounds. Returns 0 if both verdicts pass, 1 otherwise.
int cmd_validate(const ExperimentSpec& spec, const RunOptions& opts);

// Re-renders the comparison SVGs from an existing comparison CSV.
int cmd_plot(const ExperimentSpec& spec, const RunOptions& opts);

}  // namespace minshare
