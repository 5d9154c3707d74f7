// Classical single-chain double-spend race against the public chain.
#pragma once

#include <cstdint>

#include "powsim/core.hpp"

namespace powsim {

struct ClassicalDsState {
    uint64_t l_attacker = 0;
    uint64_t l_public = 0;
};

inline bool operator==(const ClassicalDsState& a, const ClassicalDsState& b) {
    return a.l_attacker == b.l_attacker && a.l_public == b.l_public;
}

struct ClassicalStepResult {
    ClassicalDsState next;
    bool succeeded = false;
};

// Success uses the same predicate as the dual-chain attack's settlement:
// the attacker chain has caught up and the public chain is z deep.
inline ClassicalStepResult classical_ds_step(const ClassicalDsState& s,
                                             SimplifiedEvent ev, uint32_t z) {
    ClassicalStepResult r;
    r.next = s;
    if (ev == SimplifiedEvent::adversary) {
        r.next.l_attacker += 1;
    } else {
        r.next.l_public += 1;
    }
    r.succeeded = r.next.l_attacker >= r.next.l_public && r.next.l_public >= z;
    return r;
}

// Give up once the public chain is four blocks ahead; beyond that gap a
// fresh start has better odds than catching up.
inline bool should_reinitialize_classical(const ClassicalDsState& s) {
    return s.l_public >= s.l_attacker + 4;
}

} // namespace powsim
