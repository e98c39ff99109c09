#include "minshare/observation_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "minshare/errors.hpp"

namespace minshare {

LikelihoodModel::LikelihoodModel(int n_agents, int n_hypotheses, std::vector<int> alphabet_sizes,
                                 std::vector<std::vector<double>> tables)
    : n_agents_(n_agents),
      n_hypotheses_(n_hypotheses),
      alphabet_sizes_(std::move(alphabet_sizes)),
      tables_(std::move(tables)) {
    if (n_agents_ < 1) throw std::invalid_argument("LikelihoodModel: n_agents must be positive");
    if (n_hypotheses_ < 2) throw std::invalid_argument("LikelihoodModel: need at least 2 hypotheses");
    if (static_cast<int>(alphabet_sizes_.size()) != n_agents_ ||
        static_cast<int>(tables_.size()) != n_agents_)
        throw std::invalid_argument("LikelihoodModel: per-agent sizes do not match n_agents");
    for (int i = 0; i < n_agents_; ++i) {
        const int n_obs = alphabet_sizes_[static_cast<std::size_t>(i)];
        const auto& t = tables_[static_cast<std::size_t>(i)];
        if (n_obs < 1)
            throw std::invalid_argument("LikelihoodModel: alphabet size must be >= 1");
        if (t.size() != static_cast<std::size_t>(n_obs) * static_cast<std::size_t>(n_hypotheses_))
            throw std::invalid_argument("LikelihoodModel: table size mismatch for agent " +
                                        std::to_string(i));
        for (int h = 0; h < n_hypotheses_; ++h) {
            double sum = 0.0;
            for (int o = 0; o < n_obs; ++o) {
                double v = t[static_cast<std::size_t>(o) * n_hypotheses_ + h];
                if (!(v > 0.0) || !std::isfinite(v))
                    throw std::invalid_argument("LikelihoodModel: nonpositive likelihood (agent " +
                                                std::to_string(i) + ")");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("LikelihoodModel: column for hypothesis " +
                                            std::to_string(h) + " of agent " + std::to_string(i) +
                                            " does not sum to 1");
        }
    }
}

int LikelihoodModel::alphabet_size(int agent) const {
    if (agent < 0 || agent >= n_agents_)
        throw std::invalid_argument("LikelihoodModel: agent out of range");
    return alphabet_sizes_[static_cast<std::size_t>(agent)];
}

double LikelihoodModel::likelihood(int agent, int observation, int hypothesis) const {
    if (hypothesis < 0 || hypothesis >= n_hypotheses_)
        throw std::invalid_argument("LikelihoodModel: hypothesis out of range");
    return likelihood_row(agent, observation)[static_cast<std::size_t>(hypothesis)];
}

std::span<const double> LikelihoodModel::likelihood_row(int agent, int observation) const {
    if (observation < 0 || observation >= alphabet_size(agent))
        throw std::invalid_argument("LikelihoodModel: observation out of range");
    const auto& t = tables_[static_cast<std::size_t>(agent)];
    return {t.data() + static_cast<std::size_t>(observation) * n_hypotheses_,
            static_cast<std::size_t>(n_hypotheses_)};
}

const std::vector<double>& LikelihoodModel::table(int agent) const {
    if (agent < 0 || agent >= n_agents_)
        throw std::invalid_argument("LikelihoodModel: agent out of range");
    return tables_[static_cast<std::size_t>(agent)];
}

namespace {

// One likelihood table for one agent: independent columns.
std::vector<double> random_table(int n_obs, int n_hypotheses, double floor, rng::Engine& eng) {
    std::uniform_real_distribution<double> draw(floor, 1.0);
    std::vector<double> t(static_cast<std::size_t>(n_obs) * static_cast<std::size_t>(n_hypotheses));
    std::vector<double> col(static_cast<std::size_t>(n_obs));
    for (int h = 0; h < n_hypotheses; ++h) {
        double sum = 0.0;
        for (int o = 0; o < n_obs; ++o) {
            col[static_cast<std::size_t>(o)] = draw(eng);
            sum += col[static_cast<std::size_t>(o)];
        }
        double refloored = 0.0;
        for (int o = 0; o < n_obs; ++o) {
            col[static_cast<std::size_t>(o)] = std::max(col[static_cast<std::size_t>(o)] / sum, floor);
            refloored += col[static_cast<std::size_t>(o)];
        }
        for (int o = 0; o < n_obs; ++o)
            t[static_cast<std::size_t>(o) * n_hypotheses + h] =
                col[static_cast<std::size_t>(o)] / refloored;
    }
    return t;
}

double min_pairwise_kl(const std::vector<double>& table, int n_obs, int n_hypotheses) {
    double worst = std::numeric_limits<double>::infinity();
    for (int l = 0; l < n_hypotheses; ++l) {
        for (int k = 0; k < n_hypotheses; ++k) {
            if (l == k) continue;
            double kl = 0.0;
            for (int o = 0; o < n_obs; ++o) {
                double p = table[static_cast<std::size_t>(o) * n_hypotheses + l];
                double q = table[static_cast<std::size_t>(o) * n_hypotheses + k];
                kl += p * std::log(p / q);
            }
            worst = std::min(worst, kl);
        }
    }
    return worst;
}

}  // namespace

LikelihoodModel generate_random_model(const ModelGenParams& params) {
    if (params.n_agents < 1)
        throw std::invalid_argument("generate_random_model: n_agents must be positive");
    if (params.n_hypotheses < 2)
        throw std::invalid_argument("generate_random_model: need at least 2 hypotheses");
    if (params.min_kl < 0.0)
        throw std::invalid_argument("generate_random_model: min_kl must be nonnegative");

    std::vector<int> sizes;
    if (params.alphabet_sizes.size() == 1)
        sizes.assign(static_cast<std::size_t>(params.n_agents), params.alphabet_sizes.front());
    else
        sizes = params.alphabet_sizes;
    if (static_cast<int>(sizes.size()) != params.n_agents)
        throw std::invalid_argument("generate_random_model: alphabet_sizes must broadcast or match");
    int max_obs = 1;
    for (int s : sizes) {
        if (s < 1) throw std::invalid_argument("generate_random_model: alphabet size must be >= 1");
        max_obs = std::max(max_obs, s);
    }
    if (!(params.floor > 0.0) || !(params.floor < 1.0 / max_obs))
        throw std::invalid_argument("generate_random_model: floor must lie in (0, 1/max|O_i|)");
    for (int a : params.discriminating_agents)
        if (a < 0 || a >= params.n_agents)
            throw std::invalid_argument("generate_random_model: discriminating agent out of range");

    rng::Engine eng(rng::make_stream(params.seed, "likelihood_model"));
    std::vector<std::vector<double>> tables(static_cast<std::size_t>(params.n_agents));
    for (int i = 0; i < params.n_agents; ++i) {
        const int n_obs = sizes[static_cast<std::size_t>(i)];
        const bool constrained =
            std::find(params.discriminating_agents.begin(), params.discriminating_agents.end(),
                      i) != params.discriminating_agents.end();
        if (!constrained) {
            tables[static_cast<std::size_t>(i)] =
                random_table(n_obs, params.n_hypotheses, params.floor, eng);
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        bool done = false;
        for (int attempt = 0; attempt < params.max_attempts && !done; ++attempt) {
            auto t = random_table(n_obs, params.n_hypotheses, params.floor, eng);
            double worst = min_pairwise_kl(t, n_obs, params.n_hypotheses);
            best = std::max(best, worst);
            if (worst >= params.min_kl) {
                tables[static_cast<std::size_t>(i)] = std::move(t);
                done = true;
            }
        }
        if (!done) {
            std::ostringstream msg;
            msg << "generate_random_model: agent " << i << " did not reach min_kl=" << params.min_kl
                << " within " << params.max_attempts << " attempts (best minimum KL " << best
                << ")";
            throw EngineError(msg.str());
        }
    }
    return LikelihoodModel(params.n_agents, params.n_hypotheses, std::move(sizes),
                           std::move(tables));
}

double kl_divergence(const LikelihoodModel& model, int agent, int h_l, int h_k) {
    if (h_l < 0 || h_l >= model.n_hypotheses() || h_k < 0 || h_k >= model.n_hypotheses())
        throw std::invalid_argument("kl_divergence: hypothesis out of range");
    const int n_obs = model.alphabet_size(agent);
    double kl = 0.0;
    for (int o = 0; o < n_obs; ++o) {
        const auto row = model.likelihood_row(agent, o);
        const double p = row[static_cast<std::size_t>(h_l)];
        const double q = row[static_cast<std::size_t>(h_k)];
        kl += p * std::log(p / q);
    }
    return kl;
}

std::vector<int> discriminating_set(const LikelihoodModel& model, int h_l, int h_k) {
    if (h_l == h_k)
        throw std::invalid_argument("discriminating_set: hypotheses must differ");
    std::vector<int> out;
    for (int i = 0; i < model.n_agents(); ++i)
        if (kl_divergence(model, i, h_l, h_k) > kKlZeroTolerance) out.push_back(i);
    return out;
}

IdentifiabilityReport check_global_identifiability(const LikelihoodModel& model) {
    IdentifiabilityReport report;
    for (int l = 0; l < model.n_hypotheses(); ++l)
        for (int k = l + 1; k < model.n_hypotheses(); ++k)
            if (discriminating_set(model, l, k).empty()) report.failing_pairs.emplace_back(l, k);
    report.identifiable = report.failing_pairs.empty();
    return report;
}

int sample_observation(const LikelihoodModel& model, int agent, int h_true, rng::Engine& stream) {
    if (h_true < 0 || h_true >= model.n_hypotheses())
        throw std::invalid_argument("sample_observation: hypothesis out of range");
    const int n_obs = model.alphabet_size(agent);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(stream);
    double cum = 0.0;
    for (int o = 0; o < n_obs; ++o) {
        cum += model.likelihood(agent, o, h_true);
        if (u < cum) return o;
    }
    return n_obs - 1;  // guard against the column summing to 1-eps
}

void save_model(const LikelihoodModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open model file for writing: " + path.string());
    out << "minshare model v1\n";
    out << "agents " << model.n_agents() << "\n";
    out << "hypotheses " << model.n_hypotheses() << "\n";
    out << "alphabet";
    for (int i = 0; i < model.n_agents(); ++i) out << " " << model.alphabet_size(i);
    out << "\n";
    char buf[40];
    for (int i = 0; i < model.n_agents(); ++i) {
        out << "agent " << i << "\n";
        for (int o = 0; o < model.alphabet_size(i); ++o) {
            const auto row = model.likelihood_row(i, o);
            for (int h = 0; h < model.n_hypotheses(); ++h) {
                std::snprintf(buf, sizeof buf, "%.17g", row[static_cast<std::size_t>(h)]);
                out << (h ? " " : "") << buf;
            }
            out << "\n";
        }
    }
    if (!out) throw IoError("failed writing model file: " + path.string());
}

namespace {

std::string expect_line(std::istream& in, const std::filesystem::path& path) {
    std::string line;
    if (!std::getline(in, line))
        throw SpecError(path.string() + ": truncated model file");
    return line;
}

}  // namespace

LikelihoodModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path.string());
    if (expect_line(in, path) != "minshare model v1")
        throw SpecError(path.string() + ": not a minshare model file");

    auto parse_kv = [&](const std::string& key) {
        std::istringstream ss(expect_line(in, path));
        std::string word;
        long long value;
        if (!(ss >> word >> value) || word != key)
            throw SpecError(path.string() + ": expected '" + key + " <n>'");
        return static_cast<int>(value);
    };
    const int n_agents = parse_kv("agents");
    const int n_hypotheses = parse_kv("hypotheses");

    std::istringstream alpha_ss(expect_line(in, path));
    std::string word;
    alpha_ss >> word;
    if (word != "alphabet") throw SpecError(path.string() + ": expected 'alphabet ...'");
    std::vector<int> sizes;
    int s;
    while (alpha_ss >> s) sizes.push_back(s);
    if (static_cast<int>(sizes.size()) != n_agents)
        throw SpecError(path.string() + ": alphabet entry count does not match agents");

    std::vector<std::vector<double>> tables(static_cast<std::size_t>(n_agents));
    for (int i = 0; i < n_agents; ++i) {
        std::istringstream head(expect_line(in, path));
        int agent_id;
        if (!(head >> word >> agent_id) || word != "agent" || agent_id != i)
            throw SpecError(path.string() + ": expected 'agent " + std::to_string(i) + "'");
        auto& t = tables[static_cast<std::size_t>(i)];
        t.reserve(static_cast<std::size_t>(sizes[static_cast<std::size_t>(i)]) *
                  static_cast<std::size_t>(n_hypotheses));
        for (int o = 0; o < sizes[static_cast<std::size_t>(i)]; ++o) {
            std::istringstream row(expect_line(in, path));
            double v;
            int read = 0;
            while (row >> v) {
                t.push_back(v);
                ++read;
            }
            if (read != n_hypotheses)
                throw SpecError(path.string() + ": row with " + std::to_string(read) +
                                " values, expected " + std::to_string(n_hypotheses));
        }
    }
    return LikelihoodModel(n_agents, n_hypotheses, std::move(sizes), std::move(tables));
}

}  // namespace minshare
