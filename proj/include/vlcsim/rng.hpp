#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace vlcsim {

using Rng = std::mt19937_64;

/// Derive an independent substream from a base seed and a path of stream ids.
/// Streams with distinct paths are decorrelated; the mapping is stable, so
/// results do not depend on scheduling or worker count.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(seed));
    words.push_back(static_cast<std::uint32_t>(seed >> 32));
    for (std::uint64_t p : path) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace vlcsim
