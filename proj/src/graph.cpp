#include "minshare/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "minshare/errors.hpp"
#include "minshare/rng.hpp"

namespace minshare {

Network::Network(int n_agents, const std::vector<std::pair<int, int>>& edges)
    : n_agents_(n_agents) {
    if (n_agents < 1) throw std::invalid_argument("Network: n_agents must be positive");
    adjacency_.assign(static_cast<std::size_t>(n_agents), {});
    for (const auto& [i, j] : edges) {
        if (i < 0 || i >= n_agents || j < 0 || j >= n_agents)
            throw std::invalid_argument("Network: edge (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") references agent >= n_agents");
        if (i == j)
            throw std::invalid_argument("Network: self-loop at agent " + std::to_string(i));
        adjacency_[static_cast<std::size_t>(i)].push_back(j);
    }
    // Edge sets have set semantics: duplicates collapse.
    n_edges_ = 0;
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        n_edges_ += nbrs.size();
    }
}

const std::vector<int>& Network::neighbors(int agent) const {
    if (agent < 0 || agent >= n_agents_)
        throw std::invalid_argument("Network::neighbors: agent " + std::to_string(agent) +
                                    " out of range");
    return adjacency_[static_cast<std::size_t>(agent)];
}

bool Network::has_edge(int from, int to) const {
    const auto& nbrs = neighbors(from);
    return std::binary_search(nbrs.begin(), nbrs.end(), to);
}

std::vector<std::pair<int, int>> Network::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(n_edges_);
    for (int i = 0; i < n_agents_; ++i)
        for (int j : adjacency_[static_cast<std::size_t>(i)]) out.emplace_back(i, j);
    return out;
}

namespace {

// Iterative DFS over an adjacency list; marks everything reachable from 0.
std::size_t count_reachable(const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

bool is_strongly_connected(const Network& g) {
    const auto n = static_cast<std::size_t>(g.n_agents());
    if (n == 1) return true;
    std::vector<std::vector<int>> forward(n), reverse(n);
    for (int i = 0; i < g.n_agents(); ++i) {
        for (int j : g.neighbors(i)) {
            forward[static_cast<std::size_t>(i)].push_back(j);
            reverse[static_cast<std::size_t>(j)].push_back(i);
        }
    }
    // Reachability from 0 both ways is equivalent to strong connectivity.
    return count_reachable(forward) == n && count_reachable(reverse) == n;
}

Network generate_k_regular(int n, int k, std::uint64_t seed, int max_attempts) {
    if (k < 1 || n <= k)
        throw std::invalid_argument("generate_k_regular: requires n > k >= 1");
    if ((static_cast<long long>(n) * k) % 2 != 0)
        throw std::invalid_argument("generate_k_regular: n*k must be even");

    rng::Engine eng(rng::splitmix64(seed));
    std::vector<int> stubs(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    for (int v = 0; v < n; ++v)
        for (int c = 0; c < k; ++c) stubs[static_cast<std::size_t>(v) * k + c] = v;

    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::shuffle(stubs.begin(), stubs.end(), eng);
        std::set<std::pair<int, int>> undirected;
        bool simple = true;
        for (std::size_t m = 0; m + 1 < stubs.size(); m += 2) {
            int a = stubs[m], b = stubs[m + 1];
            if (a == b) {
                simple = false;
                break;
            }
            auto e = std::minmax(a, b);
            if (!undirected.insert({e.first, e.second}).second) {
                simple = false;  // multi-edge
                break;
            }
        }
        if (!simple) continue;
        std::vector<std::pair<int, int>> directed;
        directed.reserve(undirected.size() * 2);
        for (const auto& [a, b] : undirected) {
            directed.emplace_back(a, b);
            directed.emplace_back(b, a);
        }
        Network g(n, directed);
        if (is_strongly_connected(g)) return g;
    }
    throw EngineError("generate_k_regular: no strongly connected simple graph found within " +
                      std::to_string(max_attempts) + " attempts (n=" + std::to_string(n) +
                      ", k=" + std::to_string(k) + ")");
}

Network generate_circulant(int n, int k) {
    if (k < 1 || n <= k)
        throw std::invalid_argument("generate_circulant: requires n > k >= 1");
    if (k % 2 == 1 && n % 2 != 0)
        throw std::invalid_argument("generate_circulant: odd k needs even n (antipodal edge)");
    std::vector<std::pair<int, int>> directed;
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= k / 2; ++d) {
            int j = (i + d) % n;
            directed.emplace_back(i, j);
            directed.emplace_back(j, i);
        }
        if (k % 2 == 1) {
            int j = (i + n / 2) % n;
            directed.emplace_back(i, j);
            directed.emplace_back(j, i);
        }
    }
    return Network(n, directed);
}

Network load_edge_list(const std::filesystem::path& path, int n_agents) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path.string());
    std::vector<std::pair<int, int>> edges;
    int max_index = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        long long i, j;
        if (!(ss >> i)) continue;  // blank (or comment-only) line
        std::string trailing;
        if (!(ss >> j) || (ss >> trailing)) {
            throw SpecError(path.string() + ":" + std::to_string(line_no) +
                            ": expected exactly two agent indices per line");
        }
        if (i < 0 || j < 0)
            throw SpecError(path.string() + ":" + std::to_string(line_no) +
                            ": negative agent index");
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        max_index = std::max(max_index, static_cast<int>(std::max(i, j)));
    }
    if (n_agents >= 1) {
        if (max_index >= n_agents)
            throw SpecError(path.string() + ": edge references agent " +
                            std::to_string(max_index) + " but n is " + std::to_string(n_agents));
        return Network(n_agents, edges);
    }
    if (max_index < 0) throw SpecError(path.string() + ": edge list contains no edges");
    return Network(max_index + 1, edges);
}

}  // namespace minshare
