#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rahbo {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic substream addressed by a key path, e.g. {seed, phase, round}.
// Splitting by key keeps independently seeded runs reproducible regardless of
// execution order or thread scheduling.
inline std::mt19937_64 make_stream(std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t k : keys) {
        h = mix64(h ^ k);
    }
    return std::mt19937_64(h);
}

// Role-specific seed for a sub-procedure that seeds itself.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(mix64(seed) ^ mix64(tag));
}

// Stream tags used to derive independent substreams from one run seed.
namespace stream_tag {
inline constexpr std::uint64_t kInitDesign = 1;
inline constexpr std::uint64_t kAcquisition = 2;
inline constexpr std::uint64_t kHyperfitObjective = 3;
inline constexpr std::uint64_t kHyperfitVariance = 4;
inline constexpr std::uint64_t kUncertaintySampling = 5;
inline constexpr std::uint64_t kSobolScramble = 6;
}  // namespace stream_tag

}  // namespace rahbo
