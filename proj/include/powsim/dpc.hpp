// Dual-private-chain double-spend attack: the adversary maintains a header-only
// distraction chain (chain 1) and a hidden double-spending chain (chain 2)
// against the public chain, shifting hash power between them.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "powsim/core.hpp"

namespace powsim {

// Attack state. Lengths count blocks since attack initialization. The sync
// flags record chain identity (same chain), not merely equal length: two
// distinct forks of equal length keep their flag false.
struct DpcState {
    uint64_t l_pub = 0;
    uint64_t l_1 = 0;
    uint64_t l_2 = 0;
    bool sync_pub_1 = true; // chain_pub and chain_1 are the same chain
    bool sync_1_2 = true;   // chain_1 and chain_2 are the same chain
    uint64_t n_t2 = 0;            // type-2-discovered blocks currently on chain 2
    uint64_t adv_blocks_on_2 = 0; // adversary-discovered blocks currently on chain 2
    uint64_t events_elapsed = 0;  // block events since attack initialization
};

inline bool operator==(const DpcState& a, const DpcState& b) {
    return a.l_pub == b.l_pub && a.l_1 == b.l_1 && a.l_2 == b.l_2 &&
           a.sync_pub_1 == b.sync_pub_1 && a.sync_1_2 == b.sync_1_2 &&
           a.n_t2 == b.n_t2 && a.adv_blocks_on_2 == b.adv_blocks_on_2;
}

inline DpcState dpc_init_state() { return DpcState{}; }

struct StepOutcome {
    DpcState next_state;
    int64_t adversary_reward_delta = 0;
    int64_t honest_reward_delta = 0;
    bool double_spend_succeeded = false;
    uint32_t headers_released = 0;
    // Net growth of the accepted public chain from this event, including the
    // override on settlement (the replaced public suffix is subtracted).
    int64_t public_chain_delta = 0;
};

// The adversary splits its power only while chain 1 rides the public chain;
// once chain 1 holds a header lead everything goes to chain 2.
inline MiningAllocation dpc_allocation(const DpcState& s) {
    return s.sync_pub_1 ? MiningAllocation::split_across_both_chains
                        : MiningAllocation::all_on_chain2;
}

namespace detail {

[[noreturn]] inline void unreachable_transition(const DpcState& s, BlockEvent ev,
                                                Type2Behavior behavior) {
    throw std::logic_error(
        "dpc_step: no transition for state (l_pub=" + std::to_string(s.l_pub) +
        ", l_1=" + std::to_string(s.l_1) + ", l_2=" + std::to_string(s.l_2) +
        ", sync_pub_1=" + (s.sync_pub_1 ? "t" : "f") +
        ", sync_1_2=" + (s.sync_1_2 ? "t" : "f") +
        ") event=" + std::to_string(static_cast<int>(ev)) +
        " behavior=" + to_string(behavior));
}

inline void check_state(const DpcState& s, BlockEvent ev, Type2Behavior behavior) {
    const bool optimistic = behavior == Type2Behavior::optimistic;
    bool ok = s.l_pub <= s.l_1 && s.n_t2 + s.adv_blocks_on_2 == s.l_2;
    if (s.sync_pub_1 && s.l_pub != s.l_1) ok = false;
    if (s.sync_1_2 && s.l_1 != s.l_2) ok = false;
    if (optimistic) {
        if (s.l_2 > s.l_1) ok = false;
        if (s.sync_pub_1 && !s.sync_1_2 && s.l_2 > s.l_pub) ok = false;
    } else {
        // Pessimistically, desynchronized chain 1 always holds a strict lead.
        if (!s.sync_pub_1 && s.l_1 == s.l_pub) ok = false;
    }
    if (!ok) unreachable_transition(s, ev, behavior);
}

} // namespace detail

// Applies one block event to the attack state and reports reward movements.
// Transitions follow the attack's state tables for the configured type 2
// behavior; a (state, event) pair outside them aborts the trial loudly.
inline StepOutcome dpc_step(const DpcState& s, BlockEvent ev, Type2Behavior behavior,
                            uint32_t z, const EconomicsConfig& econ) {
    detail::check_state(s, ev, behavior);

    const bool optimistic = behavior == Type2Behavior::optimistic;
    const int64_t vb = econ.block_reward_units;
    const bool adversary_block =
        ev == BlockEvent::adversary_chain1 || ev == BlockEvent::adversary_chain2;

    StepOutcome out;
    DpcState n = s;
    n.events_elapsed += 1;

    if (s.sync_pub_1 && s.sync_1_2) {
        // All three chains are the same chain.
        if (adversary_block) {
            // Found on the common head; both private chains take it and the
            // header goes out to split the honest miners.
            n.l_1 += 1;
            n.l_2 += 1;
            n.adv_blocks_on_2 += 1;
            n.sync_pub_1 = false;
            out.headers_released = 1;
        } else {
            n.l_pub += 1;
            n.l_1 += 1;
            n.sync_1_2 = false;
            out.honest_reward_delta += vb;
            out.public_chain_delta += 1;
        }
    } else if (!s.sync_pub_1 && s.sync_1_2) {
        // The private pair (chain_1 == chain_2) races the public chain.
        if (optimistic) {
            if (ev == BlockEvent::adversary_chain2 || ev == BlockEvent::type2) {
                n.l_1 += 1;
                n.l_2 += 1;
                if (ev == BlockEvent::type2) n.n_t2 += 1; else n.adv_blocks_on_2 += 1;
                if (adversary_block) out.headers_released = 1;
            } else if (ev == BlockEvent::type1) {
                n.l_pub += 1;
                out.honest_reward_delta += vb;
                out.public_chain_delta += 1;
                if (s.l_1 == s.l_pub) {
                    // Public chain passes the tied pair: chain 1 re-adopts it.
                    n.l_1 += 1;
                    n.sync_pub_1 = true;
                    n.sync_1_2 = false;
                }
            } else {
                detail::unreachable_transition(s, ev, behavior);
            }
        } else {
            if (ev == BlockEvent::adversary_chain2) {
                n.l_2 += 1;
                n.adv_blocks_on_2 += 1;
                n.sync_1_2 = false;
                out.headers_released = 1;
            } else if (ev == BlockEvent::type1) {
                n.l_pub += 1;
                n.sync_pub_1 = n.l_1 == n.l_pub;
                n.sync_1_2 = false;
                out.honest_reward_delta += vb;
                out.public_chain_delta += 1;
            } else if (ev == BlockEvent::type2) {
                // Pessimistic fallback: type 2 miners give up on the header
                // pair; the usable header lead shrinks by one. The reward
                // credit follows the transition table even though the public
                // chain itself does not grow here.
                n.l_1 -= 1;
                n.sync_pub_1 = n.l_1 == n.l_pub;
                n.sync_1_2 = false;
                out.honest_reward_delta += vb;
            } else {
                detail::unreachable_transition(s, ev, behavior);
            }
        }
    } else if (s.sync_pub_1 && !s.sync_1_2) {
        // Chain 1 rides the public chain; chain 2 races on its own.
        if (ev == BlockEvent::adversary_chain1) {
            n.l_1 += 1;
            n.sync_pub_1 = false;
            out.headers_released = 1;
        } else if (ev == BlockEvent::adversary_chain2) {
            n.l_2 += 1;
            n.adv_blocks_on_2 += 1;
            out.headers_released = 1;
            if (optimistic && s.l_2 == s.l_pub) {
                // Chain 2 pulls ahead of everything; chain 1 adopts it so
                // header-followers feed the double-spend directly.
                n.l_1 += 1;
                n.sync_pub_1 = false;
                n.sync_1_2 = true;
            }
        } else {
            n.l_pub += 1;
            n.l_1 += 1;
            out.honest_reward_delta += vb;
            out.public_chain_delta += 1;
        }
    } else {
        // All three chains are distinct.
        if (ev == BlockEvent::adversary_chain2) {
            n.l_2 += 1;
            n.adv_blocks_on_2 += 1;
            out.headers_released = 1;
            if (optimistic && s.l_2 == s.l_1) {
                // Chain 2 becomes the longest chain; chain 1 adopts it.
                n.l_1 += 1;
                n.sync_1_2 = true;
            }
        } else if (ev == BlockEvent::type2) {
            if (optimistic) {
                n.l_2 += 1;
                n.n_t2 += 1;
                if (s.l_2 == s.l_1) {
                    n.l_1 += 1;
                    n.sync_1_2 = true;
                }
            } else {
                // Pessimistic fallback, no reward movement in this family.
                n.l_1 -= 1;
                n.sync_pub_1 = n.l_1 == n.l_pub;
            }
        } else if (ev == BlockEvent::type1) {
            n.l_pub += 1;
            out.honest_reward_delta += vb;
            out.public_chain_delta += 1;
            if (optimistic) {
                if (s.l_1 == s.l_pub) {
                    // Public chain passes chain 1: chain 1 re-adopts it.
                    n.l_1 += 1;
                    n.sync_pub_1 = true;
                }
            } else {
                n.sync_pub_1 = n.l_1 == n.l_pub;
            }
        } else {
            detail::unreachable_transition(s, ev, behavior);
        }
    }

    // Settlement: once the public chain is deep enough and chain 2 has caught
    // up, the adversary publishes chain 2 and overrides the public chain.
    if (n.l_2 >= n.l_pub && n.l_pub >= z) {
        out.double_spend_succeeded = true;
        out.adversary_reward_delta +=
            static_cast<int64_t>(n.l_2 - n.n_t2) * vb + econ.double_spend_value_units;
        out.honest_reward_delta -= static_cast<int64_t>(n.l_pub - n.n_t2) * vb;
        out.public_chain_delta += static_cast<int64_t>(n.l_2) - static_cast<int64_t>(n.l_pub);
        // Optimistic attacks keep the surviving header lead of chain 1 above
        // the new public tip; pessimistic attacks restart from scratch.
        const uint64_t lead = optimistic ? n.l_1 - n.l_pub : 0;
        n = DpcState{};
        n.l_1 = lead;
        n.sync_pub_1 = lead == 0;
        n.sync_1_2 = lead == 0;
    }

    out.next_state = n;
    return out;
}

} // namespace powsim
