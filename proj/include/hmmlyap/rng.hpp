#pragma once

#include <cstdint>

namespace hmmlyap::rng {

// Deterministic, platform-independent randomness. std:: engines are avoided
// on purpose: distribution output is implementation-defined, and every
// acceptance figure in this project must replay bit-for-bit from a seed.
//
// Generator: xoshiro256++ 1.0, state seeded by four successive SplitMix64
// outputs. Doubles via the top-53-bits rule. Categorical draws via a linear
// CDF scan in index order. None of this may change without versioning.

inline constexpr std::uint64_t kSplitMix64Gamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function (Steele, Lea, Flood 2014).
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t z = x + kSplitMix64Gamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed of the i-th independent stream under a master seed. Replicated
// experiments (windows, batches) must derive their seeds through this and
// never by incrementing the master seed.
inline constexpr std::uint64_t substream(std::uint64_t master, std::uint64_t idx) {
    return mix64(master ^ mix64(idx));
}

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) {
            sm += kSplitMix64Gamma;
            std::uint64_t z = sm;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Index i with probability p[i], 0-based. p must sum to 1 up to
    // rounding; the final index absorbs the rounding tail.
    int categorical(const double* p, int n) {
        const double u = uniform01();
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            acc += p[i];
            if (u < acc) return i;
        }
        return n - 1;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

} // namespace hmmlyap::rng
