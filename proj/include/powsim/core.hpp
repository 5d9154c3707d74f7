// Shared domain types: hash-power profiles, block-discovery events, economics.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "powsim/rng.hpp"

namespace powsim {

// Hash-power shares are exact thousandths so that event probabilities are
// rationals whose sum is exactly 1 and runs reproduce bit-for-bit.
inline constexpr uint32_t kPowerScale = 1000;
inline constexpr uint32_t kEventScale = kPowerScale * kPowerScale;

struct PowerProfile {
    uint32_t alpha_pm = 0; // adversary share of global hash power, in [0, 500]
    uint32_t beta_pm = 0;  // share of adversary power on the distraction chain, in [0, 1000]
    uint32_t mu_pm = 0;    // type 2 miner share of global hash power, in [0, 500]

    static PowerProfile from_fractions(double alpha, double beta, double mu) {
        auto pm = [](double v) {
            return static_cast<uint32_t>(std::llround(v * kPowerScale));
        };
        return PowerProfile{pm(alpha), pm(beta), pm(mu)};
    }

    double alpha() const { return static_cast<double>(alpha_pm) / kPowerScale; }
    double beta() const { return static_cast<double>(beta_pm) / kPowerScale; }
    double mu() const { return static_cast<double>(mu_pm) / kPowerScale; }
};

// How type 2 miners react to block headers whose bodies never arrive.
enum class Type2Behavior { optimistic, pessimistic };

inline const char* to_string(Type2Behavior b) {
    return b == Type2Behavior::optimistic ? "optimistic" : "pessimistic";
}

// Which party discovered the next block, and on which adversary chain when
// the adversary splits its power.
enum class BlockEvent : uint8_t {
    adversary_chain1 = 0,
    adversary_chain2 = 1,
    type1 = 2,
    type2 = 3,
};

// Two-sided event used by the selfish-mining and single-chain race baselines.
enum class SimplifiedEvent { adversary, honest };

// Where the adversary points its hash power for the next block event.
enum class MiningAllocation {
    split_across_both_chains, // alpha*beta on chain 1, alpha*(1-beta) on chain 2
    all_on_chain2,            // alpha on chain 2
    all_on_chain1,            // alpha on chain 1 (standalone distraction strategy)
};

// Monetary amounts in integer base units of v_b/100, so two-decimal
// v_t / v_b ratios are exact and revenue sums never round.
struct EconomicsConfig {
    int64_t block_reward_units = 100;        // v_b
    int64_t double_spend_value_units = 1000; // v_t

    static EconomicsConfig with_vt_ratio(double ratio) {
        EconomicsConfig e;
        e.double_spend_value_units = static_cast<int64_t>(std::llround(ratio * 100.0));
        return e;
    }

    double vt_ratio() const {
        return static_cast<double>(double_spend_value_units) / 100.0;
    }
};

// Returns std::nullopt when all profile bounds hold, otherwise a message
// naming the violated bound.
inline std::optional<std::string> validate_profile(const PowerProfile& p) {
    if (p.alpha_pm > 500)
        return "alpha out of range: must be in [0, 0.5], got " + std::to_string(p.alpha());
    if (p.beta_pm > 1000)
        return "beta out of range: must be in [0, 1], got " + std::to_string(p.beta());
    if (p.mu_pm > 500)
        return "mu out of range: must be in [0, 0.5], got " + std::to_string(p.mu());
    if (p.alpha_pm + p.mu_pm > 1000)
        return "alpha + mu exceeds 1: type 1 power would be negative";
    return std::nullopt;
}

inline void require_valid(const PowerProfile& p) {
    if (auto err = validate_profile(p)) throw std::invalid_argument(*err);
}

// Per-event category probabilities as numerators over kEventScale.
// The four entries always sum to exactly kEventScale.
struct EventDistribution {
    uint32_t adversary_chain1 = 0;
    uint32_t adversary_chain2 = 0;
    uint32_t type1 = 0;
    uint32_t type2 = 0;

    uint32_t total() const {
        return adversary_chain1 + adversary_chain2 + type1 + type2;
    }
};

inline EventDistribution event_distribution(const PowerProfile& p, MiningAllocation alloc) {
    EventDistribution d;
    switch (alloc) {
        case MiningAllocation::split_across_both_chains:
            d.adversary_chain1 = p.alpha_pm * p.beta_pm;
            d.adversary_chain2 = p.alpha_pm * (kPowerScale - p.beta_pm);
            break;
        case MiningAllocation::all_on_chain2:
            d.adversary_chain2 = p.alpha_pm * kPowerScale;
            break;
        case MiningAllocation::all_on_chain1:
            d.adversary_chain1 = p.alpha_pm * kPowerScale;
            break;
    }
    d.type2 = p.mu_pm * kPowerScale;
    d.type1 = kEventScale - d.adversary_chain1 - d.adversary_chain2 - d.type2;
    return d;
}

inline BlockEvent sample_event(const EventDistribution& d, Rng& rng) {
    uint32_t u = rng.next_below(kEventScale);
    if (u < d.adversary_chain1) return BlockEvent::adversary_chain1;
    u -= d.adversary_chain1;
    if (u < d.adversary_chain2) return BlockEvent::adversary_chain2;
    u -= d.adversary_chain2;
    if (u < d.type1) return BlockEvent::type1;
    return BlockEvent::type2;
}

inline BlockEvent sample_event(const PowerProfile& p, MiningAllocation alloc, Rng& rng) {
    return sample_event(event_distribution(p, alloc), rng);
}

} // namespace powsim
