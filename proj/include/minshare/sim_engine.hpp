#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minshare/belief.hpp"
#include "minshare/graph.hpp"
#include "minshare/observation_model.hpp"
#include "minshare/rng.hpp"

namespace minshare {

enum class SharingKind {
    full,               // neighbors exchange whole belief vectors
    partial_previous,   // one hypothesis per round; stored per-neighbor estimates
    partial_own,        // one hypothesis per round; estimates built from own beliefs
    fixed,              // one fixed hypothesis every round (stored estimates)
};

struct SharingMode {
    SharingKind kind = SharingKind::full;
    int fixed_hypothesis = -1;  // only meaningful for SharingKind::fixed

    static SharingMode full() { return {SharingKind::full, -1}; }
    static SharingMode partial_previous() { return {SharingKind::partial_previous, -1}; }
    static SharingMode partial_own() { return {SharingKind::partial_own, -1}; }
    static SharingMode fixed(int hypothesis) { return {SharingKind::fixed, hypothesis}; }

    bool shares_partially() const { return kind != SharingKind::full; }
    bool stores_estimates() const {
        return kind == SharingKind::partial_previous || kind == SharingKind::fixed;
    }
};

std::string to_string(SharingKind kind);

// Who picks the shared hypothesis each round: one draw for the whole
// network, or an independent draw per agent (each sender announces its own
// choice alongside the value).
enum class TauMode { global, per_agent };

std::string to_string(TauMode mode);

struct RecordFlags {
    bool local_beliefs = false;
    bool tau_draws = false;
    int every = 1;  // record rounds divisible by this; round 0 and the final round always
};

struct SimulationConfig {
    Network network;
    LikelihoodModel model;
    int h_true = 0;
    SharingMode mode;
    TauMode tau_mode = TauMode::global;
    int horizon = 0;
    std::uint64_t master_seed = 0;
    RecordFlags record;
};

struct AgentState {
    BeliefVector alpha;  // local Bayesian belief
    BeliefVector beta;   // public belief exposed to neighbors
    // Per-neighbor estimate vectors, parallel to Network::neighbors(i);
    // populated only by modes that store estimates.
    std::vector<BeliefVector> estimates;
};

// Time-indexed record of a run. beta_log[r] is the flattened n_agents x M
// matrix of public log-beliefs at recorded round rounds[r]; round 0 is
// always present, so a fully recorded run holds horizon+1 rounds.
struct Trajectory {
    int n_agents = 0;
    int n_hypotheses = 0;
    int horizon = 0;
    std::vector<int> rounds;
    std::vector<std::vector<double>> beta_log;
    std::vector<std::vector<double>> alpha_log;  // empty unless recorded
    std::vector<std::vector<int>> tau;           // empty unless recorded

    std::uint64_t master_seed = 0;
    std::string config_digest;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;

    std::size_t n_rounds() const { return rounds.size(); }
    double beta_log_at(std::size_t round_index, int agent, int hypothesis) const;
    double alpha_log_at(std::size_t round_index, int agent, int hypothesis) const;
    std::optional<std::size_t> index_of_round(int t) const;
};

// Independent named streams derived from the master seed: one observation
// stream per agent plus tau streams; constructing them is draw-free, so all
// variants are laid out identically regardless of mode.
struct RngStreams {
    std::vector<rng::Engine> observations;
    rng::Engine tau_global;
    std::vector<rng::Engine> tau_agent;
};

RngStreams make_streams(int n_agents, std::uint64_t master_seed);
RngStreams make_streams(const SimulationConfig& config);

// Per-agent shared-hypothesis assignment for one round. Empty for full
// sharing (nothing is drawn); a single global draw is broadcast to all
// agents; per-agent draws are independent; fixed mode is draw-free.
std::vector<int> select_tau(TauMode tau_mode, const SharingMode& mode, int n_hypotheses,
                            int n_agents, RngStreams& streams);

// All agents start from equal beliefs; estimate vectors likewise.
std::vector<AgentState> initial_states(const SimulationConfig& config);

struct StepResult {
    std::vector<AgentState> states;
    std::vector<int> tau;  // empty when the mode shares full vectors
};

// One synchronous round: every agent samples an observation and refreshes
// its local belief, the shared-hypothesis assignment is drawn, messages are
// formed from round t-1 public beliefs, and the mode's estimate and public
// updates run. Reads reference only the previous round, so the outcome is
// invariant to processing_order (leave empty for identity order).
StepResult step(const std::vector<AgentState>& prev, int round, const SimulationConfig& config,
                RngStreams& streams, std::span<const int> processing_order = {});

// Executes horizon rounds from uniform initial state; deterministic in the
// config including master_seed.
Trajectory run(const SimulationConfig& config, std::span<const int> processing_order = {});

// Stable fingerprint of everything that determines a run's output.
std::string config_digest(const SimulationConfig& config);

}  // namespace minshare
