#pragma once

// Seeded pseudo-random generation for every randomized operation in the library.
//
// The generator is xoshiro256** (Blackman & Vigna), seeded through SplitMix64. Child seeds are
// derived by hashing (master seed, stream tag, counter), so the stream consumed by repetition m
// does not depend on which thread ran repetition m-1. Uniform and normal variates are produced
// by code in this header rather than <random> distributions, whose output is not pinned across
// standard library implementations.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace cvlab {

/// Generator identifier written to manifests. Bump when the bit stream changes.
inline constexpr const char* kRngName = "xoshiro256**/splitmix64-v1";

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// hash(master, stream, counter) -> child seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                           std::uint64_t counter) noexcept {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s = h ^ (stream * 0xD1B54A32D192ED03ULL);
    h = splitmix64(s);
    s = h ^ (counter * 0xAEF17502108EF2D9ULL);
    return splitmix64(s);
}

/// Stream tags used across the library. Values are part of the reproducibility contract.
namespace streams {
inline constexpr std::uint64_t kPartition = 0x10;
inline constexpr std::uint64_t kPartitionClass1 = 0x11;
inline constexpr std::uint64_t kPartitionClass2 = 0x12;
inline constexpr std::uint64_t kBootstrap = 0x20;
inline constexpr std::uint64_t kBootstrapClass1 = 0x21;
inline constexpr std::uint64_t kBootstrapClass2 = 0x22;
inline constexpr std::uint64_t kBootstrapRetry = 0x2F;
inline constexpr std::uint64_t kTrial = 0x30;
inline constexpr std::uint64_t kTrainingData = 0x31;
inline constexpr std::uint64_t kTestData = 0x32;
inline constexpr std::uint64_t kEstimator = 0x33;
inline constexpr std::uint64_t kRatioReplicate = 0x40;
}  // namespace streams

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Lemire's nearly-divisionless method; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal variate (Box-Muller, both halves used).
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cvlab
