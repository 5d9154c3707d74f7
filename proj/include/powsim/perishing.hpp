// Header-release withholding strategy: the adversary mines a private chain
// and publishes only block headers to pull header-following miners off the
// public chain.
#pragma once

#include <stdexcept>

#include "powsim/core.hpp"

namespace powsim {

// Chain lengths counted from strategy start. The private chain never falls
// behind the public chain: the adversary adopts as soon as it is overtaken.
struct PerishState {
    uint64_t l_private = 0;
    uint64_t l_public = 0;
    bool chains_equal = true;
};

inline bool operator==(const PerishState& a, const PerishState& b) {
    return a.l_private == b.l_private && a.l_public == b.l_public &&
           a.chains_equal == b.chains_equal;
}

// True when this event will extend the public chain from the given state.
inline bool perishing_extends_public(const PerishState& s, BlockEvent ev) {
    if (ev == BlockEvent::type1) return true;
    if (ev == BlockEvent::type2) return s.chains_equal;
    return false;
}

inline PerishState perishing_step(const PerishState& s, BlockEvent ev, Type2Behavior behavior) {
    PerishState n = s;
    switch (ev) {
        case BlockEvent::adversary_chain1:
            // Adversary block: withhold the body, release the header.
            n.l_private += 1;
            n.chains_equal = false;
            break;
        case BlockEvent::type1:
            n.l_public += 1;
            if (n.l_public > n.l_private) {
                // Public chain passed the private one: adopt it.
                n.l_private = n.l_public;
                n.chains_equal = true;
            }
            break;
        case BlockEvent::type2:
            if (s.chains_equal) {
                // No fork in sight: the block extends the common chain.
                n.l_public += 1;
                n.l_private += 1;
            } else if (behavior == Type2Behavior::optimistic) {
                // Header-followers lengthen the private chain.
                n.l_private += 1;
            }
            // Pessimistic type 2 effort on a forked header chain is wasted.
            break;
        case BlockEvent::adversary_chain2:
            throw std::logic_error(
                "perishing_step: adversary_chain2 event is not part of this strategy");
    }
    return n;
}

} // namespace powsim
