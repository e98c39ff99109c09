#include "minshare/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "minshare/errors.hpp"
#include "minshare/metrics.hpp"

namespace minshare::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::filesystem::path& path, int line_no) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw SpecError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::filesystem::path& path, int line_no) {
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw SpecError(path.string() + ":" + std::to_string(line_no) + ": bad integer '" + s + "'");
    return v;
}

}  // namespace

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,agent,hypothesis,log_belief\n";
    for (std::size_t r = 0; r < traj.n_rounds(); ++r)
        for (int i = 0; i < traj.n_agents; ++i)
            for (int h = 0; h < traj.n_hypotheses; ++h)
                out << traj.rounds[r] << ',' << i << ',' << h << ','
                    << format_double(traj.beta_log_at(r, i, h)) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_metrics(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,agent,hypothesis,rate\n";
    for (int i = 0; i < traj.n_agents; ++i)
        for (int h = 0; h < traj.n_hypotheses; ++h) {
            const auto series = rejection_rate(traj, i, h);
            for (std::size_t r = 0; r < series.rounds.size(); ++r)
                out << series.rounds[r] << ',' << i << ',' << h << ','
                    << format_double(series.values[r]) << '\n';
        }
    if (!out) throw IoError("failed writing " + path.string());
}

Trajectory read_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trajectory: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "t,agent,hypothesis,log_belief")
        throw SpecError(path.string() + ": unexpected trajectory header");

    struct Cell {
        int t, agent, hypothesis;
        double value;
    };
    std::vector<Cell> cells;
    int n_agents = 0, n_hypotheses = 0;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 4)
            throw SpecError(path.string() + ":" + std::to_string(line_no) + ": expected 4 fields");
        Cell c{static_cast<int>(parse_long(fields[0], path, line_no)),
               static_cast<int>(parse_long(fields[1], path, line_no)),
               static_cast<int>(parse_long(fields[2], path, line_no)),
               parse_double(fields[3], path, line_no)};
        n_agents = std::max(n_agents, c.agent + 1);
        n_hypotheses = std::max(n_hypotheses, c.hypothesis + 1);
        cells.push_back(c);
    }
    if (cells.empty()) throw SpecError(path.string() + ": empty trajectory");

    Trajectory traj;
    traj.n_agents = n_agents;
    traj.n_hypotheses = n_hypotheses;
    std::map<int, std::vector<double>> by_round;
    for (const auto& c : cells) {
        auto& flat = by_round[c.t];
        if (flat.empty())
            flat.assign(static_cast<std::size_t>(n_agents) * static_cast<std::size_t>(n_hypotheses),
                        0.0);
        flat[static_cast<std::size_t>(c.agent) * n_hypotheses +
             static_cast<std::size_t>(c.hypothesis)] = c.value;
    }
    for (auto& [t, flat] : by_round) {
        traj.rounds.push_back(t);
        traj.beta_log.push_back(std::move(flat));
    }
    traj.horizon = traj.rounds.back();
    return traj;
}

void write_compare(const std::filesystem::path& path, std::span<const CompareRow> rows) {
    auto out = open_out(path);
    out << "mode,t,agent,log_belief_true,log_belief_plot,rate_plot\n";
    for (const auto& row : rows) {
        out << row.mode << ',' << row.t << ',' << row.agent << ','
            << format_double(row.log_belief_true) << ',' << format_double(row.log_belief_plot)
            << ',';
        if (row.has_rate) out << format_double(row.rate_plot);
        out << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<CompareRow> read_compare(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open comparison file: " + path.string());
    std::string line;
    if (!std::getline(in, line) ||
        line != "mode,t,agent,log_belief_true,log_belief_plot,rate_plot")
        throw SpecError(path.string() + ": unexpected comparison header");
    std::vector<CompareRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 6)
            throw SpecError(path.string() + ":" + std::to_string(line_no) + ": expected 6 fields");
        CompareRow row;
        row.mode = fields[0];
        row.t = static_cast<int>(parse_long(fields[1], path, line_no));
        row.agent = static_cast<int>(parse_long(fields[2], path, line_no));
        row.log_belief_true = parse_double(fields[3], path, line_no);
        row.log_belief_plot = parse_double(fields[4], path, line_no);
        row.has_rate = !fields[5].empty();
        if (row.has_rate) row.rate_plot = parse_double(fields[5], path, line_no);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace minshare::csv
