#pragma once

#include <optional>
#include <vector>

#include "minshare/observation_model.hpp"
#include "minshare/sim_engine.hpp"

namespace minshare {

// Empirical rejection rate of one hypothesis by one agent:
// -log beta(h) / t per recorded round t >= 1, in nats per round.
struct RateSeries {
    int agent = 0;
    int hypothesis = 0;
    std::vector<int> rounds;
    std::vector<double> values;
};

// Exact algebra on the stored logs; no exponentiation.
RateSeries rejection_rate(const Trajectory& traj, int agent, int hypothesis);

// Network-wide asymptotic rate floor for rejecting h: the largest KL
// divergence any agent holds between h_true and h.
double theoretical_rate_bound(const LikelihoodModel& model, int h_true, int h);

// Single-agent rate floor: that agent's own KL divergence for the pair.
double discriminating_rate_bound(const LikelihoodModel& model, int agent, int h_true, int h);

// First recorded round from which the belief on h_true stays at or above the
// threshold for every later recorded round; sustained crossing, not first
// touch, because min-rule beliefs are not monotone. One entry per agent.
std::vector<std::optional<int>> convergence_time(const Trajectory& traj, double threshold,
                                                 int h_true);

// True iff every agent's final-round belief on h_true is at least 1 - tol.
bool learning_verdict(const Trajectory& traj, int h_true, double tol);

}  // namespace minshare
