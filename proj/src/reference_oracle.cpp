#include "minshare/reference_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "minshare/errors.hpp"

namespace minshare::oracle {

namespace {

constexpr double kUnderflowLimit = 1e-300;

void check_range(const DenseBelief& b, int round, const char* what) {
    for (double v : b.p)
        if (!(v >= kUnderflowLimit))
            throw EngineError("oracle range: " + std::string(what) + " underflowed at round " +
                              std::to_string(round));
}

DenseBelief uniform_dense(int m) {
    DenseBelief b;
    b.p.assign(static_cast<std::size_t>(m), 1.0 / m);
    return b;
}

}  // namespace

std::vector<AgentStateLinear> initial_states(const SimulationConfig& config) {
    const int n = config.network.n_agents();
    const DenseBelief uniform = uniform_dense(config.model.n_hypotheses());
    std::vector<AgentStateLinear> states(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& s = states[static_cast<std::size_t>(i)];
        s.alpha = uniform;
        s.beta = uniform;
        if (config.mode.stores_estimates())
            s.estimates.assign(config.network.neighbors(i).size(), uniform);
    }
    return states;
}

void oracle_step(std::vector<AgentStateLinear>& states, int round, const SimulationConfig& config,
                 RngStreams& streams) {
    const int n = config.network.n_agents();
    const int m = config.model.n_hypotheses();
    const std::vector<AgentStateLinear> prev = states;

    // Local Bayes updates.
    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const int obs = sample_observation(config.model, i, config.h_true, streams.observations[idx]);
        DenseBelief alpha;
        alpha.p.resize(static_cast<std::size_t>(m));
        double total = 0.0;
        for (int h = 0; h < m; ++h) {
            alpha.p[static_cast<std::size_t>(h)] =
                config.model.likelihood(i, obs, h) * prev[idx].alpha.p[static_cast<std::size_t>(h)];
            total += alpha.p[static_cast<std::size_t>(h)];
        }
        for (int h = 0; h < m; ++h) alpha.p[static_cast<std::size_t>(h)] /= total;
        check_range(alpha, round, "local belief");
        states[idx].alpha = alpha;
    }

    const auto tau = select_tau(config.tau_mode, config.mode, m, n, streams);

    for (int i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const auto& nbrs = config.network.neighbors(i);

        std::vector<DenseBelief> contributions;  // neighbor vectors entering the min
        contributions.reserve(nbrs.size());
        if (config.mode.kind == SharingKind::full) {
            for (int j : nbrs) contributions.push_back(prev[static_cast<std::size_t>(j)].beta);
        } else {
            for (std::size_t e = 0; e < nbrs.size(); ++e) {
                const auto j = static_cast<std::size_t>(nbrs[e]);
                const int shared = tau[j];
                const double received = prev[j].beta.p[static_cast<std::size_t>(shared)];
                const DenseBelief& base = config.mode.stores_estimates()
                                              ? prev[idx].estimates[e]
                                              : prev[idx].beta;
                const double scale = 1.0 - base.p[static_cast<std::size_t>(shared)] + received;
                DenseBelief est;
                est.p.resize(static_cast<std::size_t>(m));
                for (int h = 0; h < m; ++h)
                    est.p[static_cast<std::size_t>(h)] =
                        (h == shared ? received : base.p[static_cast<std::size_t>(h)]) / scale;
                check_range(est, round, "estimate");
                contributions.push_back(std::move(est));
            }
        }

        DenseBelief beta;
        beta.p.resize(static_cast<std::size_t>(m));
        double total = 0.0;
        for (int h = 0; h < m; ++h) {
            double v = std::min(prev[idx].beta.p[static_cast<std::size_t>(h)],
                                states[idx].alpha.p[static_cast<std::size_t>(h)]);
            for (const auto& c : contributions)
                v = std::min(v, c.p[static_cast<std::size_t>(h)]);
            beta.p[static_cast<std::size_t>(h)] = v;
            total += v;
        }
        for (int h = 0; h < m; ++h) beta.p[static_cast<std::size_t>(h)] /= total;
        check_range(beta, round, "public belief");
        states[idx].beta = beta;
        if (config.mode.stores_estimates()) states[idx].estimates = std::move(contributions);
    }
}

std::vector<std::vector<double>> oracle_run_beta(const SimulationConfig& config) {
    const int n = config.network.n_agents();
    const int m = config.model.n_hypotheses();
    auto streams = make_streams(config);
    auto states = oracle::initial_states(config);

    auto snapshot = [&](const std::vector<AgentStateLinear>& s) {
        std::vector<double> flat(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
        for (int i = 0; i < n; ++i)
            for (int h = 0; h < m; ++h)
                flat[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(h)] =
                    s[static_cast<std::size_t>(i)].beta.p[static_cast<std::size_t>(h)];
        return flat;
    };

    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(config.horizon) + 1);
    out.push_back(snapshot(states));
    for (int t = 1; t <= config.horizon; ++t) {
        oracle_step(states, t, config, streams);
        out.push_back(snapshot(states));
    }
    return out;
}

DenseBelief exhaustive_local_posterior(const LikelihoodModel& model, int agent,
                                       std::span<const int> observations,
                                       const DenseBelief& prior) {
    const int m = model.n_hypotheses();
    if (static_cast<int>(prior.p.size()) != m)
        throw std::invalid_argument("exhaustive_local_posterior: prior length mismatch");
    DenseBelief post = prior;
    for (int obs : observations)
        for (int h = 0; h < m; ++h)
            post.p[static_cast<std::size_t>(h)] *= model.likelihood(agent, obs, h);
    double total = 0.0;
    for (double v : post.p) {
        if (v < kUnderflowLimit && !observations.empty())
            throw EngineError("oracle range: posterior product underflowed");
        total += v;
    }
    for (double& v : post.p) v /= total;
    return post;
}

}  // namespace minshare::oracle
