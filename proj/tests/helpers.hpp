#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "minshare/belief.hpp"
#include "minshare/observation_model.hpp"

namespace test_helpers {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("minshare_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// Random point on the simplex, via log values in [-depth, 0].
inline minshare::BeliefVector random_belief(std::mt19937_64& eng, int m, double depth = 40.0) {
    std::uniform_real_distribution<double> draw(-depth, 0.0);
    std::vector<double> logs(static_cast<std::size_t>(m));
    for (auto& v : logs) v = draw(eng);
    return minshare::BeliefVector::from_log_unnormalized(std::move(logs));
}

inline std::vector<double> random_positive_row(std::mt19937_64& eng, int m, double lo = 1e-6,
                                               double hi = 1.0) {
    std::uniform_real_distribution<double> draw(lo, hi);
    std::vector<double> row(static_cast<std::size_t>(m));
    for (auto& v : row) v = draw(eng);
    return row;
}

// Single-agent likelihood table from explicit columns[h][o].
inline minshare::LikelihoodModel model_from_columns(
    const std::vector<std::vector<std::vector<double>>>& per_agent_columns) {
    const int n_agents = static_cast<int>(per_agent_columns.size());
    const int m = static_cast<int>(per_agent_columns.front().size());
    std::vector<int> sizes;
    std::vector<std::vector<double>> tables;
    for (const auto& columns : per_agent_columns) {
        const int n_obs = static_cast<int>(columns.front().size());
        sizes.push_back(n_obs);
        std::vector<double> t(static_cast<std::size_t>(n_obs) * static_cast<std::size_t>(m));
        for (int h = 0; h < m; ++h)
            for (int o = 0; o < n_obs; ++o)
                t[static_cast<std::size_t>(o) * m + static_cast<std::size_t>(h)] =
                    columns[static_cast<std::size_t>(h)][static_cast<std::size_t>(o)];
        tables.push_back(std::move(t));
    }
    return minshare::LikelihoodModel(n_agents, m, std::move(sizes), std::move(tables));
}

// Upper 0.999 quantile of chi-square by the Wilson-Hilferty approximation.
inline double chi2_crit_999(int df) {
    const double z = 3.090232;
    const double a = 2.0 / (9.0 * df);
    const double base = 1.0 - a + z * std::sqrt(a);
    return df * base * base * base;
}

}  // namespace test_helpers
