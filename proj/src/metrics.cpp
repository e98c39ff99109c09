#include "minshare/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace minshare {

RateSeries rejection_rate(const Trajectory& traj, int agent, int hypothesis) {
    if (agent < 0 || agent >= traj.n_agents)
        throw std::invalid_argument("rejection_rate: agent " + std::to_string(agent) +
                                    " not recorded in trajectory");
    if (hypothesis < 0 || hypothesis >= traj.n_hypotheses)
        throw std::invalid_argument("rejection_rate: hypothesis " + std::to_string(hypothesis) +
                                    " not recorded in trajectory");
    RateSeries series;
    series.agent = agent;
    series.hypothesis = hypothesis;
    for (std::size_t r = 0; r < traj.n_rounds(); ++r) {
        const int t = traj.rounds[r];
        if (t < 1) continue;
        series.rounds.push_back(t);
        series.values.push_back(-traj.beta_log_at(r, agent, hypothesis) / t);
    }
    return series;
}

double theoretical_rate_bound(const LikelihoodModel& model, int h_true, int h) {
    if (h == h_true)
        throw std::invalid_argument("theoretical_rate_bound: h must differ from h_true");
    double best = 0.0;
    for (int j = 0; j < model.n_agents(); ++j)
        best = std::max(best, kl_divergence(model, j, h_true, h));
    return best;
}

double discriminating_rate_bound(const LikelihoodModel& model, int agent, int h_true, int h) {
    if (h == h_true)
        throw std::invalid_argument("discriminating_rate_bound: h must differ from h_true");
    return kl_divergence(model, agent, h_true, h);
}

std::vector<std::optional<int>> convergence_time(const Trajectory& traj, double threshold,
                                                 int h_true) {
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw std::invalid_argument("convergence_time: threshold must lie in (0,1)");
    if (h_true < 0 || h_true >= traj.n_hypotheses)
        throw std::invalid_argument("convergence_time: h_true out of range");
    const double log_threshold = std::log(threshold);
    std::vector<std::optional<int>> out(static_cast<std::size_t>(traj.n_agents));
    for (int i = 0; i < traj.n_agents; ++i) {
        std::optional<int> first;
        // Walk backward: the sustained-crossing round is the earliest recorded
        // round of the trailing all-above suffix.
        for (std::size_t r = traj.n_rounds(); r-- > 0;) {
            if (traj.beta_log_at(r, i, h_true) >= log_threshold)
                first = traj.rounds[r];
            else
                break;
        }
        out[static_cast<std::size_t>(i)] = first;
    }
    return out;
}

bool learning_verdict(const Trajectory& traj, int h_true, double tol) {
    if (traj.n_rounds() == 0) return false;
    if (h_true < 0 || h_true >= traj.n_hypotheses)
        throw std::invalid_argument("learning_verdict: h_true out of range");
    const std::size_t last = traj.n_rounds() - 1;
    const double log_target = std::log1p(-tol);  // log(1 - tol)
    for (int i = 0; i < traj.n_agents; ++i)
        if (traj.beta_log_at(last, i, h_true) < log_target) return false;
    return true;
}

}  // namespace minshare
