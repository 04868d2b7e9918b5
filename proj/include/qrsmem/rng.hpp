#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qrsmem {

using Rng = std::mt19937_64;

// Independent stream for (root seed, stream ids): the ids and the root are
// fed to std::seed_seq, so streams differ whenever any id differs.
inline Rng derive_rng(std::uint64_t root, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words;
    words.push_back(static_cast<std::uint32_t>(root));
    words.push_back(static_cast<std::uint32_t>(root >> 32));
    for (auto s : stream) {
        words.push_back(static_cast<std::uint32_t>(s));
        words.push_back(static_cast<std::uint32_t>(s >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

}  // namespace qrsmem
