#pragma once

#include <cstdint>
#include <random>

namespace turbodec {

// Monte-Carlo runs assign every frame its own generator seeded from
// (master seed, stream index), so results do not depend on how frames are
// distributed over threads.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 stream_rng(std::uint64_t master, std::uint64_t stream) {
    return std::mt19937_64(mix_seed(master, stream));
}

}  // namespace turbodec
