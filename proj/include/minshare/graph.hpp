#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace minshare {

// Directed communication topology. An edge (i,j) means "j is a neighbor of
// i": agent i reads agent j's messages. Undirected graphs are stored as
// symmetric edge pairs so the engine needs a single adjacency abstraction.
// Immutable after construction; safe to share read-only across workers.
class Network {
public:
    Network(int n_agents, const std::vector<std::pair<int, int>>& edges);

    int n_agents() const { return n_agents_; }
    std::size_t n_edges() const { return n_edges_; }

    // Neighbor set of an agent, sorted ascending and duplicate-free.
    const std::vector<int>& neighbors(int agent) const;

    bool has_edge(int from, int to) const;

    // Full edge set as ordered pairs, sorted lexicographically.
    std::vector<std::pair<int, int>> edges() const;

private:
    int n_agents_ = 0;
    std::size_t n_edges_ = 0;
    std::vector<std::vector<int>> adjacency_;
};

// True iff every agent is reachable from every other along directed edges.
bool is_strongly_connected(const Network& g);

// Undirected k-regular graph via repeated stub pairing, rejecting self-loops
// and multi-edges, retried until strong connectivity holds. Deterministic in
// seed. Requires n > k >= 1 and n*k even.
Network generate_k_regular(int n, int k, std::uint64_t seed, int max_attempts = 1000);

// Ring circulant: each agent connected to the floor(k/2) nearest on each
// side; odd k additionally pairs antipodal agents (requires even n).
Network generate_circulant(int n, int k);

// Edge-list text file: one "i j" pair per line, 0-indexed; blank lines and
// '#' comments ignored. Agent count is the largest index plus one unless a
// larger count is passed explicitly (which also permits edgeless graphs).
Network load_edge_list(const std::filesystem::path& path, int n_agents = -1);

}  // namespace minshare
