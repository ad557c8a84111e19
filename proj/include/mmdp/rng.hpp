#pragma once

#include <cstdint>

namespace mmdp {

/// Splittable counter-based pseudorandom stream (splitmix64).
///
/// Each (seed, stream) pair yields an independent reproducible sequence, so
/// parallel trajectories can draw from disjoint streams without sharing
/// state. splitmix64 is the fixed-increment variant of Java's
/// SplittableRandom; see Steele, Lea & Flood (2014).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1)) ^ mix(stream + 0xbf58476d1ce4e5b9ULL)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), bias-free via rejection.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

}  // namespace mmdp
