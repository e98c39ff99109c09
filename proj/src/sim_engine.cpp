#include "minshare/sim_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "minshare/errors.hpp"

namespace minshare {

std::string to_string(SharingKind kind) {
    switch (kind) {
        case SharingKind::full: return "full";
        case SharingKind::partial_previous: return "partial_previous";
        case SharingKind::partial_own: return "partial_own";
        case SharingKind::fixed: return "fixed";
    }
    return "?";
}

std::string to_string(TauMode mode) {
    return mode == TauMode::global ? "global" : "per_agent";
}

double Trajectory::beta_log_at(std::size_t round_index, int agent, int hypothesis) const {
    return beta_log[round_index][static_cast<std::size_t>(agent) * n_hypotheses +
                                 static_cast<std::size_t>(hypothesis)];
}

double Trajectory::alpha_log_at(std::size_t round_index, int agent, int hypothesis) const {
    return alpha_log[round_index][static_cast<std::size_t>(agent) * n_hypotheses +
                                  static_cast<std::size_t>(hypothesis)];
}

std::optional<std::size_t> Trajectory::index_of_round(int t) const {
    auto it = std::lower_bound(rounds.begin(), rounds.end(), t);
    if (it == rounds.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - rounds.begin());
}

RngStreams make_streams(int n_agents, std::uint64_t master_seed) {
    RngStreams streams;
    streams.observations.reserve(static_cast<std::size_t>(n_agents));
    streams.tau_agent.reserve(static_cast<std::size_t>(n_agents));
    for (int i = 0; i < n_agents; ++i)
        streams.observations.push_back(
            rng::make_stream(master_seed, "obs", static_cast<std::uint64_t>(i)));
    streams.tau_global = rng::make_stream(master_seed, "tau_global");
    for (int i = 0; i < n_agents; ++i)
        streams.tau_agent.push_back(
            rng::make_stream(master_seed, "tau_agent", static_cast<std::uint64_t>(i)));
    return streams;
}

RngStreams make_streams(const SimulationConfig& config) {
    return make_streams(config.network.n_agents(), config.master_seed);
}

std::vector<int> select_tau(TauMode tau_mode, const SharingMode& mode, int n_hypotheses,
                            int n_agents, RngStreams& streams) {
    if (mode.kind == SharingKind::full) return {};
    std::vector<int> tau(static_cast<std::size_t>(n_agents));
    if (mode.kind == SharingKind::fixed) {
        std::fill(tau.begin(), tau.end(), mode.fixed_hypothesis);
        return tau;
    }
    std::uniform_int_distribution<int> pick(0, n_hypotheses - 1);
    if (tau_mode == TauMode::global) {
        std::fill(tau.begin(), tau.end(), pick(streams.tau_global));
    } else {
        if (streams.tau_agent.size() < static_cast<std::size_t>(n_agents))
            throw std::invalid_argument("select_tau: streams built for fewer agents");
        for (int i = 0; i < n_agents; ++i)
            tau[static_cast<std::size_t>(i)] = pick(streams.tau_agent[static_cast<std::size_t>(i)]);
    }
    return tau;
}

namespace {

void validate_config(const SimulationConfig& config) {
    if (config.network.n_agents() != config.model.n_agents())
        throw std::invalid_argument("config: network and model disagree on agent count");
    if (config.h_true < 0 || config.h_true >= config.model.n_hypotheses())
        throw std::invalid_argument("config: h_true out of range");
    if (config.horizon < 0) throw std::invalid_argument("config: horizon must be nonnegative");
    if (config.record.every < 1)
        throw std::invalid_argument("config: record.every must be positive");
    if (config.mode.kind == SharingKind::fixed &&
        (config.mode.fixed_hypothesis < 0 ||
         config.mode.fixed_hypothesis >= config.model.n_hypotheses()))
        throw std::invalid_argument("config: fixed hypothesis out of range");
    if (!is_strongly_connected(config.network))
        throw std::invalid_argument("config: network must be strongly connected");
}

}  // namespace

std::vector<AgentState> initial_states(const SimulationConfig& config) {
    const int n = config.network.n_agents();
    const BeliefVector uniform = uniform_belief(config.model.n_hypotheses());
    std::vector<AgentState> states(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& s = states[static_cast<std::size_t>(i)];
        s.alpha = uniform;
        s.beta = uniform;
        if (config.mode.stores_estimates())
            s.estimates.assign(config.network.neighbors(i).size(), uniform);
    }
    return states;
}

StepResult step(const std::vector<AgentState>& prev, int round, const SimulationConfig& config,
                RngStreams& streams, std::span<const int> processing_order) {
    const int n = config.network.n_agents();
    std::vector<int> identity;
    if (processing_order.empty()) {
        identity.resize(static_cast<std::size_t>(n));
        std::iota(identity.begin(), identity.end(), 0);
        processing_order = identity;
    }
    if (static_cast<int>(processing_order.size()) != n)
        throw std::invalid_argument("step: processing order must list every agent once");

    StepResult result;
    result.states.resize(static_cast<std::size_t>(n));

    auto with_context = [&](const EngineError& e, int agent) {
        EngineError wrapped("round " + std::to_string(round) + ", agent " + std::to_string(agent) +
                            ": " + e.what());
        return wrapped;
    };

    // Phase 1: private observations and local Bayes updates.
    for (int i : processing_order) {
        const auto idx = static_cast<std::size_t>(i);
        const int obs = sample_observation(config.model, i, config.h_true, streams.observations[idx]);
        result.states[idx].alpha = local_update(prev[idx].alpha, config.model.likelihood_row(i, obs));
    }

    result.tau = select_tau(config.tau_mode, config.mode, config.model.n_hypotheses(), n, streams);

    // Phase 2: messages from round t-1 public beliefs, estimate refresh,
    // public min-rule update. Only previous-round state is read.
    for (int i : processing_order) {
        const auto idx = static_cast<std::size_t>(i);
        const auto& nbrs = config.network.neighbors(i);
        auto& state = result.states[idx];
        try {
            switch (config.mode.kind) {
                case SharingKind::full: {
                    std::vector<BeliefVector> neighbor_beliefs;
                    neighbor_beliefs.reserve(nbrs.size());
                    for (int j : nbrs)
                        neighbor_beliefs.push_back(prev[static_cast<std::size_t>(j)].beta);
                    state.beta = min_rule_full(prev[idx].beta, neighbor_beliefs, state.alpha);
                    break;
                }
                case SharingKind::partial_previous:
                case SharingKind::fixed: {
                    std::vector<BeliefVector> estimates;
                    estimates.reserve(nbrs.size());
                    for (std::size_t e = 0; e < nbrs.size(); ++e) {
                        const auto j = static_cast<std::size_t>(nbrs[e]);
                        const int shared = result.tau[j];  // the sender's pick
                        const SharedMessage msg{shared, prev[j].beta.log_at(shared)};
                        estimates.push_back(estimate_update_previous(prev[idx].estimates[e], msg));
                    }
                    state.beta = min_rule_partial(prev[idx].beta, estimates, state.alpha);
                    state.estimates = std::move(estimates);
                    break;
                }
                case SharingKind::partial_own: {
                    std::vector<BeliefVector> estimates;
                    estimates.reserve(nbrs.size());
                    for (int j : nbrs) {
                        const int shared = result.tau[static_cast<std::size_t>(j)];
                        const SharedMessage msg{
                            shared, prev[static_cast<std::size_t>(j)].beta.log_at(shared)};
                        estimates.push_back(estimate_update_own(prev[idx].beta, msg));
                    }
                    state.beta = min_rule_partial(prev[idx].beta, estimates, state.alpha);
                    break;
                }
            }
        } catch (const EngineError& e) {
            throw with_context(e, i);
        }
    }
    return result;
}

namespace {

void record_round(Trajectory& traj, int t, const std::vector<AgentState>& states,
                  const std::vector<int>& tau, const SimulationConfig& config) {
    const int n = config.network.n_agents();
    const int m = config.model.n_hypotheses();
    traj.rounds.push_back(t);
    std::vector<double> beta(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < m; ++h)
            beta[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(h)] =
                states[static_cast<std::size_t>(i)].beta.log_at(h);
    traj.beta_log.push_back(std::move(beta));
    if (config.record.local_beliefs) {
        std::vector<double> alpha(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
        for (int i = 0; i < n; ++i)
            for (int h = 0; h < m; ++h)
                alpha[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(h)] =
                    states[static_cast<std::size_t>(i)].alpha.log_at(h);
        traj.alpha_log.push_back(std::move(alpha));
    }
    if (config.record.tau_draws && config.mode.shares_partially()) {
        if (tau.empty())
            traj.tau.emplace_back(static_cast<std::size_t>(n), -1);  // round 0: nothing drawn
        else
            traj.tau.push_back(tau);
    }
}

}  // namespace

Trajectory run(const SimulationConfig& config, std::span<const int> processing_order) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    Trajectory traj;
    traj.n_agents = config.network.n_agents();
    traj.n_hypotheses = config.model.n_hypotheses();
    traj.horizon = config.horizon;
    traj.master_seed = config.master_seed;
    traj.config_digest = config_digest(config);

    if (config.mode.kind != SharingKind::fixed) {
        const auto report = check_global_identifiability(config.model);
        if (!report.identifiable)
            traj.warnings.push_back("model is not globally identifiable: " +
                                    std::to_string(report.failing_pairs.size()) +
                                    " hypothesis pair(s) indistinguishable by every agent");
    }

    auto streams = make_streams(config);
    auto states = initial_states(config);
    record_round(traj, 0, states, {}, config);

    for (int t = 1; t <= config.horizon; ++t) {
        StepResult r;
        try {
            r = step(states, t, config, streams, processing_order);
        } catch (EngineError& e) {
            e.partial_trajectory = std::make_shared<Trajectory>(traj);
            throw;
        }
        states = std::move(r.states);
        if (t % config.record.every == 0 || t == config.horizon)
            record_round(traj, t, states, r.tau, config);
    }

    traj.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return traj;
}

std::string config_digest(const SimulationConfig& config) {
    std::uint64_t h = rng::fnv1a64("minshare-config-v1");
    auto mix_int = [&h](long long v) { h = rng::fnv1a64_bytes(&v, sizeof v, h); };
    auto mix_doubles = [&h](const std::vector<double>& v) {
        h = rng::fnv1a64_bytes(v.data(), v.size() * sizeof(double), h);
    };

    mix_int(config.network.n_agents());
    for (const auto& [i, j] : config.network.edges()) {
        mix_int(i);
        mix_int(j);
    }
    mix_int(config.model.n_agents());
    mix_int(config.model.n_hypotheses());
    for (int i = 0; i < config.model.n_agents(); ++i) {
        mix_int(config.model.alphabet_size(i));
        mix_doubles(config.model.table(i));
    }
    mix_int(config.h_true);
    mix_int(static_cast<int>(config.mode.kind));
    mix_int(config.mode.fixed_hypothesis);
    mix_int(static_cast<int>(config.tau_mode));
    mix_int(config.horizon);
    mix_int(static_cast<long long>(config.master_seed));
    mix_int(config.record.local_beliefs);
    mix_int(config.record.tau_draws);
    mix_int(config.record.every);

    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace minshare
