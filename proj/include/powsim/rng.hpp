// Deterministic random streams for Monte Carlo trials.
#pragma once

#include <array>
#include <cstdint>

namespace powsim {

// SplitMix64 step; used for seeding and stream derivation.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++ seeded through SplitMix64. Each concurrent caller owns its
// own instance; identical seeds reproduce identical sequences on every
// platform (no standard-library distributions are involved anywhere).
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Independent stream for (master seed, stream index). Trials, rollouts
    // and oracles each draw from their own stream so results do not depend
    // on execution order or thread count.
    static Rng for_stream(uint64_t master_seed, uint64_t stream) {
        uint64_t sm = master_seed;
        uint64_t base = splitmix64(sm);
        return Rng(base ^ (stream * 0xd1342543de82ef95ull + 0x632be59bd9b4e019ull));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw in [0, bound). Exactly one 64-bit draw per call
    // (fixed-point multiply; bias is O(bound / 2^64), far below any
    // statistical tolerance used in this project).
    uint32_t next_below(uint32_t bound) {
        return static_cast<uint32_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<uint64_t, 4> state_;
};

} // namespace powsim
