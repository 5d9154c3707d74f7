// Selfish-mining baseline: withhold a private lead, release under pressure,
// race one-block forks with a configurable tie-win fraction gamma.
#pragma once

#include <cmath>
#include <cstdint>

#include "powsim/core.hpp"

namespace powsim {

struct SelfishState {
    uint64_t private_lead = 0;
    bool fork_active = false; // one-block public fork race in progress
};

inline bool operator==(const SelfishState& a, const SelfishState& b) {
    return a.private_lead == b.private_lead && a.fork_active == b.fork_active;
}

struct SelfishStepResult {
    SelfishState next;
    uint32_t public_blocks_appended = 0;   // accepted public-chain growth
    uint32_t adversary_blocks_accepted = 0;
    uint32_t honest_blocks_accepted = 0;
};

// gamma is the fraction of honest power that mines on the adversary's fork
// block during a tie. The rng is consumed only when a tie is resolved by an
// honest block with 0 < gamma < 1.
inline SelfishStepResult selfish_step(const SelfishState& s, SimplifiedEvent ev,
                                      double gamma, Rng& rng) {
    SelfishStepResult r;
    r.next = s;

    if (s.fork_active) {
        // Two one-block branches compete at the same height; that height is
        // already counted, the resolving block adds one more.
        r.next.fork_active = false;
        r.public_blocks_appended = 1;
        if (ev == SimplifiedEvent::adversary) {
            // Adversary extends its own branch and publishes: both accepted.
            r.adversary_blocks_accepted = 2;
        } else {
            bool on_adversary_branch = false;
            if (gamma >= 1.0) {
                on_adversary_branch = true;
            } else if (gamma > 0.0) {
                const uint32_t threshold =
                    static_cast<uint32_t>(std::llround(gamma * kEventScale));
                on_adversary_branch = rng.next_below(kEventScale) < threshold;
            }
            if (on_adversary_branch) {
                r.adversary_blocks_accepted = 1;
                r.honest_blocks_accepted = 1;
            } else {
                r.honest_blocks_accepted = 2;
            }
        }
        return r;
    }

    if (ev == SimplifiedEvent::adversary) {
        r.next.private_lead = s.private_lead + 1;
        return r;
    }

    // Honest block against a withheld lead.
    switch (s.private_lead) {
        case 0:
            r.public_blocks_appended = 1;
            r.honest_blocks_accepted = 1;
            break;
        case 1:
            // Adversary releases its block: a tie forms at the new height.
            r.next.private_lead = 0;
            r.next.fork_active = true;
            r.public_blocks_appended = 1;
            break;
        case 2:
            // Full release; the two withheld blocks bury the honest one.
            r.next.private_lead = 0;
            r.public_blocks_appended = 2;
            r.adversary_blocks_accepted = 2;
            break;
        default:
            // Deep lead: one withheld block is published and locked in.
            r.next.private_lead = s.private_lead - 1;
            r.public_blocks_appended = 1;
            r.adversary_blocks_accepted = 1;
            break;
    }
    return r;
}

} // namespace powsim
