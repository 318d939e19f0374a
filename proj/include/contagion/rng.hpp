#pragma once

#include <cstdint>
#include <random>

namespace contagion {

using Rng = std::mt19937_64;

// What a per-trial stream is used for. Each purpose gets its own stream so
// that, for example, the random seed bank drawn in a trial does not depend on
// how many draws the sheet assignment consumed before it.
enum class StreamPurpose : std::uint64_t {
    network = 1,
    sheets = 2,
    policy = 3,
    seed_bank = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Counter-based derivation: the stream depends only on its coordinates, never
// on the order in which trials are executed.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t grid_index,
                         std::uint64_t trial_index, StreamPurpose purpose) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ grid_index);
    h = splitmix64(h ^ (trial_index * 0xD1B54A32D192ED03ULL));
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(grid_index),
                      static_cast<std::uint32_t>(trial_index),
                      static_cast<std::uint32_t>(trial_index >> 32),
                      static_cast<std::uint32_t>(purpose)};
    return Rng(seq);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace contagion
