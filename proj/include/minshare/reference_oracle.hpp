#pragma once

#include <span>
#include <vector>

#include "minshare/observation_model.hpp"
#include "minshare/sim_engine.hpp"

namespace minshare::oracle {

// Beliefs as plain probabilities. The oracle works entirely in the linear
// domain with naive left-to-right sums and deliberately shares no
// normalization code with the log-domain engine, so agreement between the
// two is evidence rather than tautology.
struct DenseBelief {
    std::vector<double> p;
};

struct AgentStateLinear {
    DenseBelief alpha;
    DenseBelief beta;
    std::vector<DenseBelief> estimates;  // parallel to Network::neighbors(i)
};

std::vector<AgentStateLinear> initial_states(const SimulationConfig& config);

// One synchronous round with the update formulas written out literally in
// probabilities. Observation sampling and the shared-hypothesis draw reuse
// the engine's streams so both implementations see identical randomness.
// Any probability dropping below 1e-300 raises an oracle-range error;
// callers restrict to short horizons and small KL.
void oracle_step(std::vector<AgentStateLinear>& states, int round, const SimulationConfig& config,
                 RngStreams& streams);

// Public beliefs for rounds 0..horizon, flattened n_agents x M per round.
std::vector<std::vector<double>> oracle_run_beta(const SimulationConfig& config);

// Closed-form Bayesian posterior: prior(h) scaled by the product of
// likelihoods of the observation sequence, normalized once. The iterated
// per-observation update telescopes to exactly this.
DenseBelief exhaustive_local_posterior(const LikelihoodModel& model, int agent,
                                       std::span<const int> observations,
                                       const DenseBelief& prior);

}  // namespace minshare::oracle
