#pragma once

#include <cstdint>
#include <random>

namespace levyest {

/// SplitMix64 step; used to whiten seeds before feeding std::mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent sub-stream seed for replication `index` of a master seed.
///
/// Replications can then run in any order (or in parallel) and still
/// produce identical results.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (index + 1) * 0xD6E8FEB86659FD93ULL);
    return splitmix64(s);
}

/// RNG for one (master seed, sub-stream) pair.
inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t index = 0) {
    return std::mt19937_64(substream_seed(master, index));
}

}  // namespace levyest
