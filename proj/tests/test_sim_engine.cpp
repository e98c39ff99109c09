#include "minshare/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "minshare/errors.hpp"
#include "minshare/metrics.hpp"

using namespace minshare;
using test_helpers::model_from_columns;

namespace {

Network line2() { return Network(2, {{0, 1}, {1, 0}}); }

LikelihoodModel two_agent_model() {
    return model_from_columns({
        {{0.8, 0.2}, {0.5, 0.5}},
        {{0.35, 0.65}, {0.6, 0.4}},
    });
}

SimulationConfig small_config(SharingMode mode, int horizon, std::uint64_t seed,
                              TauMode tau = TauMode::global) {
    SimulationConfig config{line2(), two_agent_model(), 0, mode, tau, horizon, seed, {}};
    return config;
}

}  // namespace

TEST_CASE("tau selection") {
    auto streams = make_streams(10, 3);

    SUBCASE("full sharing draws nothing") {
        CHECK(select_tau(TauMode::global, SharingMode::full(), 5, 4, streams).empty());
    }
    SUBCASE("global mode broadcasts one value") {
        for (int t = 0; t < 50; ++t) {
            const auto tau = select_tau(TauMode::global, SharingMode::partial_own(), 20, 7, streams);
            REQUIRE(tau.size() == 7);
            for (int v : tau) {
                CHECK(v == tau[0]);
                CHECK(v >= 0);
                CHECK(v < 20);
            }
        }
    }
    SUBCASE("fixed mode is constant") {
        for (int t = 0; t < 10; ++t) {
            const auto tau = select_tau(TauMode::global, SharingMode::fixed(1), 3, 4, streams);
            for (int v : tau) CHECK(v == 1);
        }
    }
    SUBCASE("per-agent draws differ across agents") {
        bool any_diff = false;
        for (int t = 0; t < 20; ++t) {
            const auto tau =
                select_tau(TauMode::per_agent, SharingMode::partial_previous(), 20, 10, streams);
            if (std::adjacent_find(tau.begin(), tau.end(), std::not_equal_to<>()) != tau.end())
                any_diff = true;
        }
        CHECK(any_diff);
    }
    SUBCASE("global draws are uniform over hypotheses") {
        const int rounds = 100000;
        std::vector<int> counts(4, 0);
        for (int t = 0; t < rounds; ++t)
            ++counts[static_cast<std::size_t>(
                select_tau(TauMode::global, SharingMode::partial_previous(), 4, 1, streams)[0])];
        const double sigma = std::sqrt(0.25 * 0.75 / rounds);
        for (int h = 0; h < 4; ++h)
            CHECK(std::abs(counts[static_cast<std::size_t>(h)] / double(rounds) - 0.25) <=
                  3.0 * sigma);
    }
}

TEST_CASE("single agent full sharing reduces to min with the local belief") {
    const auto model = model_from_columns({{{0.8, 0.2}, {0.5, 0.5}}});
    SimulationConfig config{Network(1, {}), model, 0, SharingMode::full(),
                            TauMode::global,  3,     0, {}};
    config.master_seed = 42;
    const Trajectory traj = run(config);

    // Replay the observation stream and fold the recursion by hand in plain
    // probabilities.
    auto obs_stream = rng::make_stream(42, "obs", 0);
    double alpha[2] = {0.5, 0.5}, beta[2] = {0.5, 0.5};
    for (std::size_t r = 1; r <= 3; ++r) {
        const int o = sample_observation(model, 0, 0, obs_stream);
        double total = 0.0;
        for (int h = 0; h < 2; ++h) {
            alpha[h] *= model.likelihood(0, o, h);
            total += alpha[h];
        }
        for (double& v : alpha) v /= total;
        total = 0.0;
        for (int h = 0; h < 2; ++h) {
            beta[h] = std::min(beta[h], alpha[h]);
            total += beta[h];
        }
        for (double& v : beta) v /= total;
        for (int h = 0; h < 2; ++h)
            CHECK(std::exp(traj.beta_log_at(r, 0, h)) == doctest::Approx(beta[h]).epsilon(1e-12));
    }
}

TEST_CASE("two-agent partial sharing matches a hand-computed trace") {
    const auto config = small_config(SharingMode::partial_previous(), 2, 91);
    const Trajectory traj = run(config);
    const auto& model = config.model;

    rng::Engine obs_stream[2] = {rng::make_stream(91, "obs", 0), rng::make_stream(91, "obs", 1)};
    auto tau_stream = rng::make_stream(91, "tau_global");

    double alpha[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
    double beta[2][2] = {{0.5, 0.5}, {0.5, 0.5}};
    double est[2][2] = {{0.5, 0.5}, {0.5, 0.5}};  // est[i]: i's estimate of its neighbor

    for (std::size_t r = 1; r <= 2; ++r) {
        for (int i = 0; i < 2; ++i) {
            const int o = sample_observation(model, i, 0, obs_stream[i]);
            double total = 0.0;
            for (int h = 0; h < 2; ++h) {
                alpha[i][h] *= model.likelihood(i, o, h);
                total += alpha[i][h];
            }
            for (double& v : alpha[i]) v /= total;
        }
        const int tau = std::uniform_int_distribution<int>(0, 1)(tau_stream);
        double new_beta[2][2];
        for (int i = 0; i < 2; ++i) {
            const int j = 1 - i;
            const double scale = 1.0 - est[i][tau] + beta[j][tau];
            for (int h = 0; h < 2; ++h)
                est[i][h] = (h == tau ? beta[j][tau] : est[i][h]) / scale;
        }
        for (int i = 0; i < 2; ++i) {
            double total = 0.0;
            for (int h = 0; h < 2; ++h) {
                new_beta[i][h] = std::min({beta[i][h], est[i][h], alpha[i][h]});
                total += new_beta[i][h];
            }
            for (double& v : new_beta[i]) v /= total;
        }
        for (int i = 0; i < 2; ++i)
            for (int h = 0; h < 2; ++h) beta[i][h] = new_beta[i][h];

        for (int i = 0; i < 2; ++i)
            for (int h = 0; h < 2; ++h)
                CHECK(std::exp(traj.beta_log_at(r, i, h)) ==
                      doctest::Approx(beta[i][h]).epsilon(1e-12));
    }
}

TEST_CASE("runs are deterministic and order-invariant") {
    for (auto mode : {SharingMode::full(), SharingMode::partial_previous(),
                      SharingMode::partial_own(), SharingMode::fixed(1)}) {
        const auto config = small_config(mode, 60, 7);
        const Trajectory a = run(config);
        const Trajectory b = run(config);
        REQUIRE(a.n_rounds() == b.n_rounds());
        for (std::size_t r = 0; r < a.n_rounds(); ++r) CHECK(a.beta_log[r] == b.beta_log[r]);

        const std::vector<int> reversed{1, 0};
        const Trajectory c = run(config, reversed);
        for (std::size_t r = 0; r < a.n_rounds(); ++r) CHECK(a.beta_log[r] == c.beta_log[r]);

        CHECK(a.config_digest == b.config_digest);
    }
}

TEST_CASE("zero-horizon run holds only the uniform initial state") {
    const auto config = small_config(SharingMode::full(), 0, 1);
    const Trajectory traj = run(config);
    REQUIRE(traj.n_rounds() == 1);
    CHECK(traj.rounds[0] == 0);
    for (int i = 0; i < 2; ++i)
        for (int h = 0; h < 2; ++h)
            CHECK(std::exp(traj.beta_log_at(0, i, h)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("uninformative observations leave every belief uniform") {
    const auto model = model_from_columns({{{1.0}, {1.0}}, {{1.0}, {1.0}}});
    SimulationConfig config{line2(), model, 0, SharingMode::full(), TauMode::global, 25, 5, {}};
    const Trajectory traj = run(config);
    for (std::size_t r = 0; r < traj.n_rounds(); ++r)
        for (int i = 0; i < 2; ++i)
            for (int h = 0; h < 2; ++h)
                CHECK(std::exp(traj.beta_log_at(r, i, h)) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("identical observations on a complete graph keep agents in lockstep") {
    // Same model and same observation sequence for every agent: the update
    // math makes all public beliefs identical every round.
    const int m = 3;
    std::mt19937_64 eng(8);
    const auto model = model_from_columns({
        {{0.6, 0.3, 0.1}, {0.2, 0.5, 0.3}, {0.25, 0.25, 0.5}},
    });
    std::vector<BeliefVector> alpha(3, uniform_belief(m)), beta(3, uniform_belief(m));
    for (int t = 1; t <= 40; ++t) {
        const int o = static_cast<int>(eng() % 3);
        std::vector<BeliefVector> new_alpha, new_beta;
        for (int i = 0; i < 3; ++i)
            new_alpha.push_back(local_update(alpha[static_cast<std::size_t>(i)],
                                             model.likelihood_row(0, o)));
        for (int i = 0; i < 3; ++i) {
            std::vector<BeliefVector> nbrs;
            for (int j = 0; j < 3; ++j)
                if (j != i) nbrs.push_back(beta[static_cast<std::size_t>(j)]);
            new_beta.push_back(min_rule_full(beta[static_cast<std::size_t>(i)], nbrs,
                                             new_alpha[static_cast<std::size_t>(i)]));
        }
        alpha = std::move(new_alpha);
        beta = std::move(new_beta);
        for (int i = 1; i < 3; ++i)
            for (int h = 0; h < m; ++h) CHECK(beta[static_cast<std::size_t>(i)].log_at(h) ==
                                              beta[0].log_at(h));
    }
}

TEST_CASE("estimates track neighbor beliefs with one round of lag") {
    // Two agents, shared hypothesis rotating over all hypotheses: stored
    // estimates converge onto the neighbor's (lagged) belief vector.
    const auto model = model_from_columns({
        {{0.7, 0.2, 0.1}, {0.2, 0.7, 0.1}, {0.1, 0.2, 0.7}},
        {{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}},
    });
    rng::Engine obs_stream[2] = {rng::make_stream(17, "obs", 0), rng::make_stream(17, "obs", 1)};
    std::vector<BeliefVector> alpha(2, uniform_belief(3)), beta(2, uniform_belief(3));
    std::vector<BeliefVector> est(2, uniform_belief(3));
    std::vector<BeliefVector> beta_prev = beta;

    const int horizon = 600;
    for (int t = 1; t <= horizon; ++t) {
        const int tau = t % 3;  // rotation covers every hypothesis
        for (int i = 0; i < 2; ++i) {
            const int o = sample_observation(model, i, 0, obs_stream[i]);
            alpha[static_cast<std::size_t>(i)] =
                local_update(alpha[static_cast<std::size_t>(i)], model.likelihood_row(i, o));
        }
        std::vector<BeliefVector> new_beta(2);
        for (int i = 0; i < 2; ++i) {
            const int j = 1 - i;
            const SharedMessage msg{tau, beta[static_cast<std::size_t>(j)].log_at(tau)};
            est[static_cast<std::size_t>(i)] =
                estimate_update_previous(est[static_cast<std::size_t>(i)], msg);
            const std::vector<BeliefVector> ests{est[static_cast<std::size_t>(i)]};
            new_beta[static_cast<std::size_t>(i)] = min_rule_partial(
                beta[static_cast<std::size_t>(i)], ests, alpha[static_cast<std::size_t>(i)]);
        }
        beta_prev = beta;
        beta = std::move(new_beta);
    }
    for (int i = 0; i < 2; ++i)
        for (int h = 0; h < 3; ++h)
            CHECK(std::abs(est[static_cast<std::size_t>(i)].prob_at(h) -
                           beta_prev[static_cast<std::size_t>(1 - i)].prob_at(h)) <= 1e-8);
}

TEST_CASE("config validation") {
    SUBCASE("disconnected network is rejected") {
        SimulationConfig config{Network(2, {{0, 1}}), two_agent_model(), 0, SharingMode::full(),
                                TauMode::global,      10,                1, {}};
        CHECK_THROWS_AS(run(config), std::invalid_argument);
    }
    SUBCASE("out-of-range hypotheses are rejected") {
        auto config = small_config(SharingMode::full(), 10, 1);
        config.h_true = 5;
        CHECK_THROWS_AS(run(config), std::invalid_argument);
        auto fixed = small_config(SharingMode::fixed(9), 10, 1);
        CHECK_THROWS_AS(run(fixed), std::invalid_argument);
    }
    SUBCASE("unidentifiable model warns but still runs") {
        const auto blind = model_from_columns({
            {{0.5, 0.5}, {0.5, 0.5}},
            {{0.7, 0.3}, {0.7, 0.3}},
        });
        SimulationConfig config{line2(), blind, 0, SharingMode::partial_previous(),
                                TauMode::global, 5, 1, {}};
        const Trajectory traj = run(config);
        CHECK(!traj.warnings.empty());

        SimulationConfig fixed = config;
        fixed.mode = SharingMode::fixed(0);
        CHECK(run(fixed).warnings.empty());  // fixed mode skips the check
    }
}

TEST_CASE("recording flags") {
    auto config = small_config(SharingMode::partial_previous(), 10, 12);
    config.record.every = 4;
    config.record.local_beliefs = true;
    config.record.tau_draws = true;
    const Trajectory traj = run(config);
    CHECK(traj.rounds == std::vector<int>{0, 4, 8, 10});
    CHECK(traj.alpha_log.size() == traj.n_rounds());
    REQUIRE(traj.tau.size() == traj.n_rounds());
    CHECK(traj.tau[0] == std::vector<int>{-1, -1});
    for (std::size_t r = 1; r < traj.tau.size(); ++r) {
        CHECK(traj.tau[r][0] == traj.tau[r][1]);  // global draw
        CHECK(traj.tau[r][0] >= 0);
    }
    CHECK(traj.index_of_round(8).has_value());
    CHECK(!traj.index_of_round(5).has_value());
}
