#include <catch2/catch_amalgamated.hpp>

#include "powsim/core.hpp"

using namespace powsim;

TEST_CASE("profile validation accepts in-range values") {
    CHECK(!validate_profile(PowerProfile::from_fractions(0.2, 0.5, 0.3)));
    CHECK(!validate_profile(PowerProfile::from_fractions(0.0, 0.0, 0.0)));
    CHECK(!validate_profile(PowerProfile::from_fractions(0.5, 1.0, 0.5)));
}

TEST_CASE("profile validation names the violated bound") {
    auto err = validate_profile(PowerProfile::from_fractions(0.6, 0.5, 0.3));
    REQUIRE(err.has_value());
    CHECK(err->find("alpha") != std::string::npos);

    err = validate_profile(PowerProfile::from_fractions(0.5, 0.0, 0.6));
    REQUIRE(err.has_value());
    CHECK(err->find("mu") != std::string::npos);

    err = validate_profile(PowerProfile::from_fractions(0.3, 1.2, 0.1));
    REQUIRE(err.has_value());
    CHECK(err->find("beta") != std::string::npos);

    CHECK_THROWS_AS(require_valid(PowerProfile::from_fractions(0.6, 0.0, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("event probabilities sum to exactly one as rationals") {
    for (uint32_t a : {0u, 100u, 200u, 350u, 500u})
        for (uint32_t b : {0u, 10u, 250u, 990u, 1000u})
            for (uint32_t m : {0u, 100u, 500u}) {
                if (a + m > 1000) continue;
                const PowerProfile p{a, b, m};
                for (auto alloc :
                     {MiningAllocation::split_across_both_chains, MiningAllocation::all_on_chain2,
                      MiningAllocation::all_on_chain1}) {
                    CHECK(event_distribution(p, alloc).total() == kEventScale);
                }
            }
}

TEST_CASE("split allocation assigns the documented shares") {
    const PowerProfile p = PowerProfile::from_fractions(0.4, 0.25, 0.1);
    const EventDistribution d =
        event_distribution(p, MiningAllocation::split_across_both_chains);
    CHECK(d.adversary_chain1 == 100'000); // alpha * beta = 0.1
    CHECK(d.adversary_chain2 == 300'000); // alpha * (1 - beta) = 0.3
    CHECK(d.type1 == 500'000);
    CHECK(d.type2 == 100'000);
}

TEST_CASE("zero adversary power never yields adversary events") {
    const PowerProfile p = PowerProfile::from_fractions(0.0, 0.7, 0.3);
    Rng rng(42);
    for (int i = 0; i < 20'000; ++i) {
        const BlockEvent ev =
            sample_event(p, MiningAllocation::split_across_both_chains, rng);
        CHECK(ev != BlockEvent::adversary_chain1);
        CHECK(ev != BlockEvent::adversary_chain2);
    }
}

TEST_CASE("sampling is a deterministic function of the stream state") {
    const PowerProfile p = PowerProfile::from_fractions(0.3, 0.4, 0.2);
    Rng a = Rng::for_stream(7, 99);
    Rng b = Rng::for_stream(7, 99);
    for (int i = 0; i < 1000; ++i)
        CHECK(sample_event(p, MiningAllocation::split_across_both_chains, a) ==
              sample_event(p, MiningAllocation::split_across_both_chains, b));
}

namespace {

void check_frequencies(const PowerProfile& p, MiningAllocation alloc, uint64_t draws,
                       double sigmas) {
    const EventDistribution d = event_distribution(p, alloc);
    Rng rng = Rng::for_stream(1234, 5678);
    std::array<uint64_t, 4> counts{};
    for (uint64_t i = 0; i < draws; ++i)
        counts[static_cast<size_t>(sample_event(d, rng))] += 1;

    const double probs[4] = {
        static_cast<double>(d.adversary_chain1) / kEventScale,
        static_cast<double>(d.adversary_chain2) / kEventScale,
        static_cast<double>(d.type1) / kEventScale,
        static_cast<double>(d.type2) / kEventScale,
    };
    for (int k = 0; k < 4; ++k) {
        const double expected = probs[k] * static_cast<double>(draws);
        const double sd = std::sqrt(probs[k] * (1 - probs[k]) * static_cast<double>(draws));
        CAPTURE(k, counts[k], expected, sd);
        CHECK(std::fabs(static_cast<double>(counts[k]) - expected) <= sigmas * sd + 1e-9);
    }
}

} // namespace

TEST_CASE("empirical frequencies match the configured probabilities") {
    // One attacker chain only: adversary events appear with frequency alpha.
    check_frequencies(PowerProfile::from_fractions(0.2, 1.0, 0.3),
                      MiningAllocation::all_on_chain2, 1'000'000, 4.0);
    // Split allocation: (0.1, 0.3, 0.5, 0.1).
    check_frequencies(PowerProfile::from_fractions(0.4, 0.25, 0.1),
                      MiningAllocation::split_across_both_chains, 1'000'000, 4.0);
}
