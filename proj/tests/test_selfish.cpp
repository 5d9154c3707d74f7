#include <catch2/catch_amalgamated.hpp>

#include "powsim/selfish.hpp"
#include "support/oracles.hpp"

using namespace powsim;

TEST_CASE("withholding starts silently") {
    Rng rng(1);
    const auto r = selfish_step(SelfishState{0, false}, SimplifiedEvent::adversary, 0.0, rng);
    CHECK(r.next == SelfishState{1, false});
    CHECK(r.public_blocks_appended == 0);
    CHECK(r.adversary_blocks_accepted == 0);
    CHECK(r.honest_blocks_accepted == 0);
}

TEST_CASE("honest block against a two-block lead triggers a full release") {
    Rng rng(1);
    const auto r = selfish_step(SelfishState{2, false}, SimplifiedEvent::honest, 0.0, rng);
    CHECK(r.next == SelfishState{0, false});
    CHECK(r.adversary_blocks_accepted == 2);
    CHECK(r.honest_blocks_accepted == 0);
    CHECK(r.public_blocks_appended == 2);
}

TEST_CASE("a fork race lost with gamma zero orphans the adversary block") {
    Rng rng(1);
    // Tie forms...
    auto r = selfish_step(SelfishState{1, false}, SimplifiedEvent::honest, 0.0, rng);
    CHECK(r.next == SelfishState{0, true});
    CHECK(r.public_blocks_appended == 1);
    // ...and the next honest block resolves it on the honest branch.
    r = selfish_step(r.next, SimplifiedEvent::honest, 0.0, rng);
    CHECK(r.next == SelfishState{0, false});
    CHECK(r.honest_blocks_accepted == 2);
    CHECK(r.adversary_blocks_accepted == 0);
    CHECK(r.public_blocks_appended == 1);
}

TEST_CASE("adversary wins the fork race with both blocks accepted") {
    Rng rng(1);
    const auto r = selfish_step(SelfishState{0, true}, SimplifiedEvent::adversary, 0.0, rng);
    CHECK(r.next == SelfishState{0, false});
    CHECK(r.adversary_blocks_accepted == 2);
    CHECK(r.public_blocks_appended == 1);
}

TEST_CASE("gamma one hands ties to the adversary branch") {
    Rng rng(1);
    const auto r = selfish_step(SelfishState{0, true}, SimplifiedEvent::honest, 1.0, rng);
    CHECK(r.adversary_blocks_accepted == 1);
    CHECK(r.honest_blocks_accepted == 1);
}

TEST_CASE("deep leads release one accepted block per honest block") {
    Rng rng(1);
    const auto r = selfish_step(SelfishState{5, false}, SimplifiedEvent::honest, 0.0, rng);
    CHECK(r.next == SelfishState{4, false});
    CHECK(r.adversary_blocks_accepted == 1);
    CHECK(r.public_blocks_appended == 1);
}

TEST_CASE("simulated relative revenue matches the closed form") {
    // alpha = 0.33, gamma = 0: compare the simulated share of accepted blocks
    // against the published closed-form expression, with the standard error
    // estimated from batch means.
    const double alpha = 0.33;
    const double expected = powsim::testing::selfish_relative_revenue(alpha, 0.0);
    const uint32_t threshold = static_cast<uint32_t>(alpha * 1'000'000);

    constexpr int kBatches = 100;
    constexpr int kEventsPerBatch = 10'000;
    double ratios[kBatches];
    Rng rng = Rng::for_stream(31337, 0);
    SelfishState st;
    for (int b = 0; b < kBatches; ++b) {
        uint64_t adv = 0, honest = 0;
        for (int i = 0; i < kEventsPerBatch; ++i) {
            const SimplifiedEvent ev = rng.next_below(1'000'000) < threshold
                                           ? SimplifiedEvent::adversary
                                           : SimplifiedEvent::honest;
            const auto r = selfish_step(st, ev, 0.0, rng);
            st = r.next;
            adv += r.adversary_blocks_accepted;
            honest += r.honest_blocks_accepted;
        }
        ratios[b] = static_cast<double>(adv) / static_cast<double>(adv + honest);
    }
    double mean = 0;
    for (double r : ratios) mean += r;
    mean /= kBatches;
    double var = 0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    var /= (kBatches - 1);
    const double se = std::sqrt(var / kBatches);
    CAPTURE(mean, expected, se);
    CHECK(std::fabs(mean - expected) <= 3.0 * se);
}

TEST_CASE("fork flag never coexists with a private lead") {
    Rng rng(77);
    SelfishState st;
    for (int i = 0; i < 100'000; ++i) {
        const SimplifiedEvent ev = rng.next_below(1'000'000) < 400'000
                                       ? SimplifiedEvent::adversary
                                       : SimplifiedEvent::honest;
        st = selfish_step(st, ev, 0.5, rng).next;
        if (st.fork_active) CHECK(st.private_lead == 0);
    }
}
