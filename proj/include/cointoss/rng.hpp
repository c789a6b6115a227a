// SPDX-License-Identifier: Apache-2.0
//
// Counter-derived random streams. Every session owns independent streams for
// Alice, Bob and the channel, derived from (master seed, session index), so a
// batch gives the same answer whatever order or thread the sessions run on.
#pragma once

#include <cstdint>
#include <limits>

namespace cointoss {

/// SplitMix64 (Steele, Lea & Flood). Small state, cheap to construct per
/// session; satisfies std::uniform_random_bit_generator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// The SplitMix64 output finalizer, usable as a stand-alone hash.
    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

using Rng = SplitMix64;

enum class StreamRole : std::uint64_t { Alice = 1, Bob = 2, Channel = 3, Auxiliary = 4 };

/// Seed for stream `role` of session `index` under `master_seed`.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                                    StreamRole role) noexcept {
    std::uint64_t h = SplitMix64::mix(master_seed ^ 0x6a09e667f3bcc909ULL);
    h = SplitMix64::mix(h ^ index);
    return SplitMix64::mix(h + static_cast<std::uint64_t>(role) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) noexcept { return uniform01(rng) < p; }

/// Standard normal variate (Box-Muller, cosine branch only so the stream
/// position never depends on cached state).
double standard_normal(Rng& rng) noexcept;

}  // namespace cointoss
