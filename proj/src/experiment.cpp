#include "minshare/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include "json.hpp"
#include "minshare/csv.hpp"
#include "minshare/errors.hpp"
#include "minshare/metrics.hpp"
#include "minshare/svg_plot.hpp"
#include "minshare/version.hpp"

namespace minshare {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentSpec resolved(const ExperimentSpec& spec, const RunOptions& opts) {
    ExperimentSpec out = spec;
    if (!opts.out_override.empty()) out.out_dir = opts.out_override;
    if (opts.seed_override) out.seeds.front() = *opts.seed_override;
    return out;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

std::string seed_tag(std::uint64_t seed) { return "seed" + std::to_string(seed); }

json spec_to_json(const ExperimentSpec& spec) {
    json j;
    switch (spec.family) {
        case ExperimentSpec::GraphFamily::k_regular: j["graph"]["family"] = "k_regular"; break;
        case ExperimentSpec::GraphFamily::circulant: j["graph"]["family"] = "circulant"; break;
        case ExperimentSpec::GraphFamily::edge_list: j["graph"]["family"] = "edge_list"; break;
    }
    if (spec.family == ExperimentSpec::GraphFamily::edge_list) {
        j["graph"]["edge_list"] = spec.edge_list_path.string();
    } else {
        j["graph"]["n"] = spec.n_agents;
        j["graph"]["k"] = spec.degree;
    }
    if (!spec.model_path.empty()) {
        j["model"]["path"] = spec.model_path.string();
    } else {
        j["model"]["hypotheses"] = spec.n_hypotheses;
        j["model"]["alphabet"] = spec.alphabet;
        j["model"]["floor"] = spec.floor;
        j["model"]["discriminating"] = spec.discriminating;
        j["model"]["min_kl"] = spec.min_kl;
        j["model"]["distribution"] = "uniform(floor,1) normalized, re-floored, renormalized";
    }
    j["run"]["mode"] = to_string(spec.mode.kind);
    if (spec.mode.kind == SharingKind::fixed)
        j["run"]["fixed_hypothesis"] = spec.mode.fixed_hypothesis;
    j["run"]["tau"] = to_string(spec.tau_mode);
    j["run"]["true_hypothesis"] = spec.h_true;
    j["run"]["horizon"] = spec.horizon;
    j["run"]["seeds"] = spec.seeds;
    j["output"]["directory"] = spec.out_dir.string();
    j["output"]["record_local"] = spec.record_local;
    j["output"]["record_tau"] = spec.record_tau;
    j["output"]["record_every"] = spec.record_every;
    return j;
}

void write_manifest(const fs::path& path, const ExperimentSpec& spec, const std::string& command,
                    std::uint64_t seed, const Trajectory* traj,
                    const std::vector<std::string>& outputs) {
    json j;
    j["tool"] = "minshare";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    j["spec"] = spec_to_json(spec);
    j["outputs"] = outputs;
    if (traj) {
        j["config_digest"] = traj->config_digest;
        j["wall_seconds"] = traj->wall_seconds;
        j["warnings"] = traj->warnings;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

// Default false hypothesis to plot: the fourth hypothesis when it exists and
// is not the true one, otherwise the smallest false index.
int pick_plot_hypothesis(const ExperimentSpec& spec, int n_hypotheses, int h_true) {
    if (spec.plot_hypothesis >= 0) {
        if (spec.plot_hypothesis >= n_hypotheses || spec.plot_hypothesis == h_true)
            throw SpecError("plot_hypothesis must name a false hypothesis");
        return spec.plot_hypothesis;
    }
    if (n_hypotheses > 3 && h_true != 3) return 3;
    for (int h = 0; h < n_hypotheses; ++h)
        if (h != h_true) return h;
    return 0;
}

// Default agent to plot: the lowest-indexed agent that cannot itself
// distinguish (h_true, h_plot); falls back to agent 0.
int pick_plot_agent(const ExperimentSpec& spec, const LikelihoodModel& model, int h_true,
                    int h_plot) {
    if (spec.plot_agent >= 0) {
        if (spec.plot_agent >= model.n_agents())
            throw SpecError("plot_agent out of range");
        return spec.plot_agent;
    }
    const auto informed = discriminating_set(model, h_true, h_plot);
    for (int i = 0; i < model.n_agents(); ++i)
        if (!std::binary_search(informed.begin(), informed.end(), i)) return i;
    return 0;
}

const char* mode_color(const std::string& mode) {
    if (mode == "full") return "#1f6fb4";
    if (mode == "partial_previous") return "#d62728";
    return "#2ca02c";
}

void render_compare_svgs(const fs::path& out_dir, const std::vector<csv::CompareRow>& rows,
                         int agent, int h_plot, double rate_bound) {
    static const std::vector<std::string> mode_order = {"full", "partial_previous", "partial_own"};

    svg::Plot belief;
    belief.title = "Belief on the true hypothesis, agent " + std::to_string(agent);
    belief.x_label = "round";
    belief.y_label = "belief";
    belief.log_y = true;
    svg::Plot rate;
    rate.title = "Rejection rate of hypothesis " + std::to_string(h_plot) + ", agent " +
                 std::to_string(agent);
    rate.x_label = "round";
    rate.y_label = "rate (nats/round)";
    rate.h_line = rate_bound;
    rate.h_line_label = "max KL bound";

    for (const auto& mode : mode_order) {
        svg::Series belief_series{mode, mode_color(mode), false, {}};
        svg::Series rate_series{mode, mode_color(mode), false, {}};
        for (const auto& row : rows) {
            if (row.mode != mode || row.agent != agent) continue;
            belief_series.points.emplace_back(row.t, std::exp(row.log_belief_true));
            if (row.has_rate) rate_series.points.emplace_back(row.t, row.rate_plot);
        }
        if (!belief_series.points.empty()) belief.series.push_back(std::move(belief_series));
        if (!rate_series.points.empty()) rate.series.push_back(std::move(rate_series));
    }

    svg::write_svg(out_dir / "belief_true.svg", belief);
    svg::write_svg(out_dir / "rejection_rate.svg", rate);
}

}  // namespace

int cmd_run(const ExperimentSpec& raw_spec, const RunOptions& opts) {
    const ExperimentSpec spec = resolved(raw_spec, opts);
    ensure_out_dir(spec.out_dir);
    for (std::uint64_t seed : spec.seeds) {
        const SimulationConfig config = build_config(spec, seed);
        const Trajectory traj = run(config);

        const fs::path traj_path = spec.out_dir / ("trajectory_" + seed_tag(seed) + ".csv");
        const fs::path metrics_path = spec.out_dir / ("metrics_" + seed_tag(seed) + ".csv");
        const fs::path manifest_path = spec.out_dir / ("manifest_" + seed_tag(seed) + ".json");
        csv::write_trajectory(traj_path, traj);
        csv::write_metrics(metrics_path, traj);
        write_manifest(manifest_path, spec, "run", seed, &traj,
                       {traj_path.filename().string(), metrics_path.filename().string()});

        if (!opts.quiet) {
            for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << "seed " << seed << ": " << traj.n_rounds() << " recorded rounds, learned="
                      << (learning_verdict(traj, config.h_true, 0.01) ? "yes" : "no") << ", "
                      << std::fixed << traj.wall_seconds << "s\n"
                      << std::defaultfloat;
        }
    }
    return 0;
}

int cmd_compare(const ExperimentSpec& raw_spec, const RunOptions& opts) {
    const ExperimentSpec spec = resolved(raw_spec, opts);
    ensure_out_dir(spec.out_dir);
    static const std::vector<SharingMode> modes = {
        SharingMode::full(), SharingMode::partial_previous(), SharingMode::partial_own()};

    std::vector<csv::CompareRow> first_seed_rows;
    int plot_agent = 0, plot_hypothesis = 0;
    double rate_bound = 0.0;

    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
        const std::uint64_t seed = spec.seeds[s];
        // One instance per seed, shared by all three modes; observation
        // streams derive from the same master seed, so the modes see
        // identical draws.
        ExperimentSpec base_spec = spec;
        base_spec.mode = SharingMode::full();
        const SimulationConfig base = build_config(base_spec, seed);
        const int h_plot = pick_plot_hypothesis(spec, base.model.n_hypotheses(), spec.h_true);
        const int agent = pick_plot_agent(spec, base.model, spec.h_true, h_plot);
        std::vector<csv::CompareRow> rows;

        for (const auto& mode : modes) {
            SimulationConfig config = base;
            config.mode = mode;
            const Trajectory traj = run(config);
            if (!opts.quiet)
                for (const auto& w : traj.warnings) std::cerr << "warning: " << w << '\n';
            const std::string label = to_string(mode.kind);
            for (std::size_t r = 0; r < traj.n_rounds(); ++r) {
                for (int i = 0; i < traj.n_agents; ++i) {
                    csv::CompareRow row;
                    row.mode = label;
                    row.t = traj.rounds[r];
                    row.agent = i;
                    row.log_belief_true = traj.beta_log_at(r, i, spec.h_true);
                    row.log_belief_plot = traj.beta_log_at(r, i, h_plot);
                    if (row.t >= 1) {
                        row.has_rate = true;
                        row.rate_plot = -row.log_belief_plot / row.t;
                    }
                    rows.push_back(std::move(row));
                }
            }
            if (!opts.quiet) {
                const auto times = convergence_time(traj, 0.99, spec.h_true);
                std::vector<int> reached;
                for (const auto& t : times)
                    if (t) reached.push_back(*t);
                std::sort(reached.begin(), reached.end());
                std::cout << "seed " << seed << " " << label << ": ";
                if (reached.size() == times.size())
                    std::cout << "median convergence round "
                              << reached[(reached.size() - 1) / 2] << "\n";
                else
                    std::cout << (times.size() - reached.size()) << " agent(s) not converged\n";
            }
        }

        const fs::path csv_path = spec.out_dir / ("compare_" + seed_tag(seed) + ".csv");
        csv::write_compare(csv_path, rows);
        if (s == 0) {
            first_seed_rows = std::move(rows);
            plot_agent = agent;
            plot_hypothesis = h_plot;
            rate_bound = theoretical_rate_bound(base.model, spec.h_true, h_plot);
        }
    }

    if (spec.plots)
        render_compare_svgs(spec.out_dir, first_seed_rows, plot_agent, plot_hypothesis, rate_bound);
    write_manifest(spec.out_dir / "manifest_compare.json", spec, "compare", spec.seeds.front(),
                   nullptr, {});
    return 0;
}

int cmd_validate(const ExperimentSpec& raw_spec, const RunOptions& opts) {
    const ExperimentSpec spec = resolved(raw_spec, opts);
    const std::uint64_t seed = spec.seeds.front();
    const Network network = build_network(spec, seed);
    const LikelihoodModel model = build_model(spec, network.n_agents(), seed);

    std::cout << "graph: " << network.n_agents() << " agents, " << network.n_edges()
              << " directed edges\n";
    const bool connected = is_strongly_connected(network);
    std::cout << "strong connectivity: " << (connected ? "PASS" : "FAIL") << "\n";
    if (!connected) {
        // List unreachable ordered pairs, capped.
        int shown = 0;
        long long total = 0;
        for (int i = 0; i < network.n_agents(); ++i) {
            std::vector<char> seen(static_cast<std::size_t>(network.n_agents()), 0);
            std::vector<int> stack{i};
            seen[static_cast<std::size_t>(i)] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (int w : network.neighbors(v))
                    if (!seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = 1;
                        stack.push_back(w);
                    }
            }
            for (int j = 0; j < network.n_agents(); ++j)
                if (!seen[static_cast<std::size_t>(j)]) {
                    ++total;
                    if (shown < 20) {
                        std::cout << "  no path " << i << " -> " << j << "\n";
                        ++shown;
                    }
                }
        }
        if (total > shown) std::cout << "  (" << (total - shown) << " more unreachable pairs)\n";
    }

    const auto report = check_global_identifiability(model);
    const int m = model.n_hypotheses();
    std::cout << "identifiability: " << (report.identifiable ? "PASS" : "FAIL") << " ("
              << (m * (m - 1) / 2 - static_cast<int>(report.failing_pairs.size())) << "/"
              << m * (m - 1) / 2 << " pairs distinguished)\n";
    for (std::size_t p = 0; p < report.failing_pairs.size() && p < 20; ++p)
        std::cout << "  indistinguishable pair (" << report.failing_pairs[p].first << ", "
                  << report.failing_pairs[p].second << ")\n";
    if (report.failing_pairs.size() > 20)
        std::cout << "  (" << report.failing_pairs.size() - 20 << " more pairs)\n";

    if (!opts.quiet) {
        std::cout << "max KL over agents, row = assumed true hypothesis, col = rejected:\n";
        for (int l = 0; l < m; ++l) {
            std::cout << " ";
            for (int k = 0; k < m; ++k) {
                if (l == k) {
                    std::printf("     --");
                } else {
                    std::printf(" %6.3f", theoretical_rate_bound(model, l, k));
                }
            }
            std::cout << "\n";
        }
    }
    return connected && report.identifiable ? 0 : 1;
}

int cmd_plot(const ExperimentSpec& raw_spec, const RunOptions& opts) {
    const ExperimentSpec spec = resolved(raw_spec, opts);
    const std::uint64_t seed = spec.seeds.front();
    const fs::path csv_path = spec.out_dir / ("compare_" + seed_tag(seed) + ".csv");
    if (!fs::exists(csv_path))
        throw IoError("comparison file not found (run 'compare' first): " + csv_path.string());
    const auto rows = csv::read_compare(csv_path);

    const LikelihoodModel model = build_model(spec, build_network(spec, seed).n_agents(), seed);
    const int h_plot = pick_plot_hypothesis(spec, model.n_hypotheses(), spec.h_true);
    const int agent = pick_plot_agent(spec, model, spec.h_true, h_plot);
    render_compare_svgs(spec.out_dir, rows, agent, h_plot,
                        theoretical_rate_bound(model, spec.h_true, h_plot));
    if (!opts.quiet)
        std::cout << "re-rendered belief_true.svg and rejection_rate.svg from "
                  << csv_path.filename().string() << "\n";
    return 0;
}

}  // namespace minshare
