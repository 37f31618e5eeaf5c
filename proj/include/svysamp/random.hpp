#pragma once

#include <array>
#include <cstdint>

namespace svysamp {

namespace detail {

// SplitMix64, used only to expand seeds into engine state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t mix64(std::uint64_t x) {
    return SplitMix64(x).next();
}

} // namespace detail

/// Derives an independent seed from a base seed and a salt (used to give
/// sub-experiments their own replicate stream families).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return detail::mix64(seed ^ detail::mix64(salt ^ 0xD1B54A32D192ED03ULL));
}

/// Deterministic random stream: xoshiro256** seeded from a (seed, stream-id)
/// pair via SplitMix64. Identical pairs reproduce identical draw sequences on
/// every platform; distinct stream ids give statistically independent streams.
/// Single-owner: each concurrent replicate gets its own instance.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        detail::SplitMix64 sm(detail::mix64(seed) ^
                              detail::mix64(stream_id ^ 0x5851F42D4C957F2DULL));
        for (auto& word : state_) {
            word = sm.next();
        }
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
            state_[0] = 0x9E3779B97F4A7C15ULL;
        }
    }

    std::uint64_t next_u64() {
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

    /// Uniform double in [0, 1), 53 significant bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Bernoulli draw with success probability p (p = 1 always succeeds).
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_;
    std::uint64_t stream_id_;
};

} // namespace svysamp
