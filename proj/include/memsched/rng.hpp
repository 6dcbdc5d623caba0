#pragma once

#include <cstdint>

namespace memsched {

// Finalizer of SplitMix64; a 64-bit bijective mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// SplitMix64 generator: tiny and deterministic across platforms.
struct SplitMix64 {
    std::uint64_t state = 0;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        return mix64(state);
    }
};

// Derives an independent stream seed from (master, a, b). Streams are
// pre-split: adding a run or a user never perturbs the draws of others.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t h = mix64(master + 0x9e3779b97f4a7c15ull);
    h = mix64(h ^ (a + 0xc2b2ae3d27d4eb4full));
    h = mix64(h ^ (b + 0x165667b19e3779f9ull));
    return h;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& g) {
    return static_cast<double>(g.next() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound) without modulo bias.
inline int uniform_int(SplitMix64& g, int bound) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(g.next()) * static_cast<std::uint64_t>(bound);
    return static_cast<int>(wide >> 64);
}

}  // namespace memsched
