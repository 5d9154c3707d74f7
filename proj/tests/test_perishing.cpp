#include <catch2/catch_amalgamated.hpp>

#include "powsim/perishing.hpp"
#include "powsim/rng.hpp"

using namespace powsim;

namespace {
PerishState st(uint64_t priv, uint64_t pub, bool equal) {
    return PerishState{priv, pub, equal};
}
} // namespace

TEST_CASE("adversary block extends the private chain and opens a fork") {
    const PerishState next =
        perishing_step(st(5, 5, true), BlockEvent::adversary_chain1, Type2Behavior::optimistic);
    CHECK(next == st(6, 5, false));
}

TEST_CASE("pessimistic type 2 effort on a forked header chain is wasted") {
    const PerishState next =
        perishing_step(st(6, 5, false), BlockEvent::type2, Type2Behavior::pessimistic);
    CHECK(next == st(6, 5, false));
}

TEST_CASE("optimistic type 2 miners extend the forked private chain") {
    const PerishState next =
        perishing_step(st(6, 5, false), BlockEvent::type2, Type2Behavior::optimistic);
    CHECK(next == st(7, 5, false));
}

TEST_CASE("public chain passing the private chain forces adoption") {
    // From a length tie with distinct chains, one more public block makes the
    // public chain strictly longer; the adversary adopts it and the chains
    // become equal at the new height.
    const PerishState next =
        perishing_step(st(6, 6, false), BlockEvent::type1, Type2Behavior::optimistic);
    CHECK(next.chains_equal);
    CHECK(next.l_private == next.l_public);
    CHECK(next.l_public == 7);
}

TEST_CASE("type 2 blocks on equal chains extend both") {
    const PerishState next =
        perishing_step(st(4, 4, true), BlockEvent::type2, Type2Behavior::pessimistic);
    CHECK(next == st(5, 5, true));
}

TEST_CASE("chain 2 events are rejected") {
    CHECK_THROWS_AS(
        perishing_step(st(0, 0, true), BlockEvent::adversary_chain2, Type2Behavior::optimistic),
        std::logic_error);
}

TEST_CASE("random walks uphold the strategy invariants") {
    for (auto behavior : {Type2Behavior::optimistic, Type2Behavior::pessimistic}) {
        const PowerProfile p = PowerProfile::from_fractions(0.3, 0.0, 0.3);
        Rng rng = Rng::for_stream(2024, behavior == Type2Behavior::optimistic ? 0 : 1);
        PerishState s;
        for (int i = 0; i < 200'000; ++i) {
            const BlockEvent ev = sample_event(p, MiningAllocation::all_on_chain1, rng);
            const PerishState next = perishing_step(s, ev, behavior);
            // The public chain never passes the private one.
            CHECK(next.l_public <= next.l_private);
            if (next.chains_equal) CHECK(next.l_public == next.l_private);
            // Optimistic steps never shrink the private chain; pessimistic
            // type 2 blocks on unequal chains change nothing.
            CHECK(next.l_private >= s.l_private);
            if (behavior == Type2Behavior::pessimistic && ev == BlockEvent::type2 &&
                !s.chains_equal)
                CHECK(next == s);
            s = next;
        }
    }
}
