#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "minshare/rng.hpp"

namespace minshare {

// KL divergences at or below this are treated as "cannot distinguish";
// separates structural zeros from rounding noise.
inline constexpr double kKlZeroTolerance = 1e-12;

// Keeps every generated likelihood strictly positive under floating point.
inline constexpr double kDefaultLikelihoodFloor = 1e-6;

// Per-agent conditional distributions f_i(o|h) over finite signal alphabets.
// Every entry is strictly positive and each column (fixed hypothesis) sums to
// one within 1e-12. Immutable after construction.
class LikelihoodModel {
public:
    // tables[i] is row-major |O_i| x M: tables[i][o*M + h] = f_i(o|h).
    LikelihoodModel(int n_agents, int n_hypotheses, std::vector<int> alphabet_sizes,
                    std::vector<std::vector<double>> tables);

    int n_agents() const { return n_agents_; }
    int n_hypotheses() const { return n_hypotheses_; }
    int alphabet_size(int agent) const;

    double likelihood(int agent, int observation, int hypothesis) const;

    // f_i(o|.) across all hypotheses, contiguous.
    std::span<const double> likelihood_row(int agent, int observation) const;

    const std::vector<double>& table(int agent) const;

private:
    int n_agents_ = 0;
    int n_hypotheses_ = 0;
    std::vector<int> alphabet_sizes_;
    std::vector<std::vector<double>> tables_;
};

struct ModelGenParams {
    int n_agents = 0;
    int n_hypotheses = 0;
    std::vector<int> alphabet_sizes;  // one entry broadcasts to all agents
    double floor = kDefaultLikelihoodFloor;
    std::vector<int> discriminating_agents;
    double min_kl = 0.0;  // required pairwise KL for discriminating agents
    std::uint64_t seed = 0;
    int max_attempts = 1000;
};

// Random model: each column is normalized uniform(floor,1) draws, re-floored
// and renormalized. Agents listed as discriminating are redrawn until every
// ordered hypothesis pair has KL divergence at least min_kl; exhausting the
// attempt budget reports the best minimum KL achieved.
LikelihoodModel generate_random_model(const ModelGenParams& params);

// K_i(h_l, h_k) in nats; finite because entries are strictly positive.
double kl_divergence(const LikelihoodModel& model, int agent, int h_l, int h_k);

// Agents whose KL for the pair exceeds kKlZeroTolerance, sorted ascending.
std::vector<int> discriminating_set(const LikelihoodModel& model, int h_l, int h_k);

struct IdentifiabilityReport {
    bool identifiable = false;
    // Unordered hypothesis pairs no agent can separate.
    std::vector<std::pair<int, int>> failing_pairs;
};

// True iff every unordered hypothesis pair has a nonempty discriminating set.
IdentifiabilityReport check_global_identifiability(const LikelihoodModel& model);

// One draw from f_i(.|h_true); i.i.d. across calls on the same stream.
int sample_observation(const LikelihoodModel& model, int agent, int h_true, rng::Engine& stream);

// Plain-text serialization; round trips are value-exact (17 significant digits).
void save_model(const LikelihoodModel& model, const std::filesystem::path& path);
LikelihoodModel load_model(const std::filesystem::path& path);

}  // namespace minshare
