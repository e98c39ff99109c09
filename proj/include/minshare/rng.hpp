#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace minshare::rng {

using Engine = std::mt19937_64;

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64_bytes(const void* data, std::size_t n,
                                   std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic sub-seed for a named stream. Streams with distinct names or
// indices are independent for any master seed; horizon and recording options
// never enter the derivation, so they cannot perturb draws.
inline std::uint64_t derive(std::uint64_t master, std::string_view stream, std::uint64_t index = 0) {
    return splitmix64(splitmix64(master ^ fnv1a64(stream)) + index);
}

inline Engine make_stream(std::uint64_t master, std::string_view stream, std::uint64_t index = 0) {
    return Engine(derive(master, stream, index));
}

}  // namespace minshare::rng
