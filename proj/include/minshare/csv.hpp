#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "minshare/sim_engine.hpp"

namespace minshare::csv {

// 17 significant digits: enough to reproduce the exact double on read-back.
std::string format_double(double v);

// Schema (bit-exact contract): header "t,agent,hypothesis,log_belief", one
// row per recorded tuple, log_belief in nats, LF endings, UTF-8.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);

// Schema: header "t,agent,hypothesis,rate"; rejection rates for every
// recorded round t >= 1.
void write_metrics(const std::filesystem::path& path, const Trajectory& traj);

// Rebuilds rounds/beta_log (and dimensions) from an exported trajectory.
Trajectory read_trajectory(const std::filesystem::path& path);

// One row of a mode-comparison export; rate_plot is empty at t = 0.
struct CompareRow {
    std::string mode;
    int t = 0;
    int agent = 0;
    double log_belief_true = 0.0;
    double log_belief_plot = 0.0;
    double rate_plot = 0.0;
    bool has_rate = false;
};

// Schema: header "mode,t,agent,log_belief_true,log_belief_plot,rate_plot".
void write_compare(const std::filesystem::path& path, std::span<const CompareRow> rows);
std::vector<CompareRow> read_compare(const std::filesystem::path& path);

}  // namespace minshare::csv
