// Closed-form and matrix companions to the simulator: catch-up race
// probabilities, the distraction strategy's Markov chain and long-run
// public-chain growth, safe-transaction-value thresholds, and strategy
// revenue comparisons.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "powsim/engine.hpp"

namespace powsim {

namespace detail {

// Sum accumulated from the smallest magnitudes up.
inline double stable_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(),
              [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

} // namespace detail

// Probability that an attacker with hash share q overrides a transaction
// buried under z confirmations, with the attacker's head start during the
// confirmation period modeled as a Poisson count (lambda = z q / p) and the
// remaining race as a gambler's-ruin catch-up.
inline double nakamoto_probability(double q, uint32_t z) {
    if (q < 0.0 || q >= 1.0)
        throw std::invalid_argument("nakamoto_probability: q must be in [0, 1)");
    if (q >= 0.5) return 1.0;
    if (z == 0) return 1.0;
    if (q == 0.0) return 0.0;

    const double p = 1.0 - q;
    const double r = q / p;
    const double lambda = static_cast<double>(z) * r;

    std::vector<double> terms;
    terms.reserve(z + 1);
    double poisson = std::exp(-lambda); // k = 0
    for (uint32_t k = 0; k <= z; ++k) {
        terms.push_back(poisson * (1.0 - std::pow(r, static_cast<double>(z - k))));
        poisson *= lambda / (k + 1);
    }
    return std::clamp(1.0 - detail::stable_sum(std::move(terms)), 0.0, 1.0);
}

// Same race with the attacker's head start given its exact distribution:
// the number of attacker blocks found before the z-th public block is
// negative binomial. This is also the distribution the event-driven
// simulation realizes, so it upper-bounds the Poisson variant.
inline double rosenfeld_probability(double q, uint32_t z) {
    if (q < 0.0 || q >= 1.0)
        throw std::invalid_argument("rosenfeld_probability: q must be in [0, 1)");
    if (q >= 0.5) return 1.0;
    if (z == 0) return 1.0;
    if (q == 0.0) return 0.0;

    const double p = 1.0 - q;
    const double r = q / p;

    std::vector<double> terms;
    terms.reserve(z + 1);
    double weight = std::pow(p, static_cast<double>(z)); // NB(k = 0; z, p)
    for (uint32_t k = 0; k <= z; ++k) {
        terms.push_back(weight * (1.0 - std::pow(r, static_cast<double>(z - k))));
        weight *= q * static_cast<double>(z + k) / static_cast<double>(k + 1);
    }
    return std::clamp(1.0 - detail::stable_sum(std::move(terms)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Markov chain of the distraction strategy.
//
// State 0 is the synced state (private chain equals the public chain);
// state 1 + d is a fork with private lead d in [0, lead_cap]. The cap state
// reflects: mass that would push the lead deeper self-loops there.

struct TransitionMatrix {
    uint32_t lead_cap = 0;
    uint32_t denominator = kPowerScale;
    std::vector<std::vector<uint32_t>> rows; // numerators over denominator
    std::vector<uint32_t> public_extension;  // per-state numerators over denominator

    static constexpr size_t kSynced = 0;
    size_t lead_index(uint32_t d) const { return 1 + d; }
    size_t size() const { return rows.size(); }
};

inline TransitionMatrix build_perishing_markov(const PowerProfile& profile,
                                               Type2Behavior behavior, uint32_t lead_cap) {
    require_valid(profile);
    if (lead_cap < 2)
        throw std::invalid_argument("build_perishing_markov: lead_cap must be >= 2");

    const uint32_t a = profile.alpha_pm;
    const uint32_t m = profile.mu_pm;
    const uint32_t down = kPowerScale - a - m;
    const bool optimistic = behavior == Type2Behavior::optimistic;

    TransitionMatrix t;
    t.lead_cap = lead_cap;
    const size_t n = lead_cap + 2;
    t.rows.assign(n, std::vector<uint32_t>(n, 0));
    t.public_extension.assign(n, 0);

    // Synced: an adversary block opens a fork at lead 1, anything else
    // extends the common chain.
    t.rows[TransitionMatrix::kSynced][t.lead_index(1)] += a;
    t.rows[TransitionMatrix::kSynced][TransitionMatrix::kSynced] += kPowerScale - a;
    t.public_extension[TransitionMatrix::kSynced] = kPowerScale - a;

    for (uint32_t d = 0; d <= lead_cap; ++d) {
        const size_t i = t.lead_index(d);
        const size_t up = d == lead_cap ? i : t.lead_index(d + 1);
        const size_t dn = d == 0 ? TransitionMatrix::kSynced : t.lead_index(d - 1);
        if (optimistic) {
            t.rows[i][up] += a + m;
        } else {
            t.rows[i][up] += a;
            t.rows[i][i] += m; // wasted type 2 effort
        }
        t.rows[i][dn] += down;
        t.public_extension[i] = down;
    }
    return t;
}

// Power iteration from the uniform vector; the accepted output satisfies
// max-norm(pi P - pi) < tolerance.
inline std::vector<double> stationary_distribution(const TransitionMatrix& t, double tolerance,
                                                   uint64_t max_iterations = 2'000'000) {
    const size_t n = t.size();
    for (size_t i = 0; i < n; ++i) {
        uint64_t row_sum = 0;
        for (uint32_t v : t.rows[i]) row_sum += v;
        if (row_sum != t.denominator)
            throw std::invalid_argument("stationary_distribution: matrix is not row-stochastic");
    }

    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    const double denom = static_cast<double>(t.denominator);
    double residual = 1.0;
    for (uint64_t it = 0; it < max_iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            const double w = pi[i];
            if (w == 0.0) continue;
            const auto& row = t.rows[i];
            for (size_t j = 0; j < n; ++j) {
                if (row[j] != 0) next[j] += w * row[j] / denom;
            }
        }
        double total = 0.0;
        for (double v : next) total += v;
        for (double& v : next) v /= total;
        residual = 0.0;
        for (size_t j = 0; j < n; ++j) residual = std::max(residual, std::fabs(next[j] - pi[j]));
        pi.swap(next);
        if (residual < tolerance) return pi;
    }
    throw std::runtime_error("stationary_distribution: no convergence within budget, residual " +
                             std::to_string(residual));
}

enum class GrowthMethod { stationary_matrix, long_run_simulation };

inline const char* to_string(GrowthMethod m) {
    return m == GrowthMethod::stationary_matrix ? "matrix" : "simulated";
}

struct GrowthEstimate {
    double value = 0.0;
    GrowthMethod method = GrowthMethod::stationary_matrix;
};

// Long-run fraction of block events that extend the public chain under the
// distraction strategy. Subcritical regimes (alpha + mu < 0.5) use the
// stationary distribution of the chain above; supercritical regimes have no
// stationary distribution (the lead drifts away), so the rate comes from a
// long simulated run and the result is labeled accordingly.
inline GrowthEstimate analytic_growth_rate(const PowerProfile& profile, Type2Behavior behavior,
                                           uint32_t lead_cap = 200,
                                           uint64_t simulation_events = 10'000'000,
                                           uint64_t seed = 1) {
    require_valid(profile);
    if (profile.alpha_pm == 0) return {1.0, GrowthMethod::stationary_matrix};

    if (profile.alpha_pm + profile.mu_pm < kPowerScale / 2) {
        const TransitionMatrix t = build_perishing_markov(profile, behavior, lead_cap);
        const std::vector<double> pi = stationary_distribution(t, 1e-12);
        double value = 0.0;
        for (size_t i = 0; i < pi.size(); ++i)
            value += pi[i] * t.public_extension[i] / static_cast<double>(t.denominator);
        return {value, GrowthMethod::stationary_matrix};
    }

    const EventDistribution dist =
        event_distribution(profile, MiningAllocation::all_on_chain1);
    Rng rng = Rng::for_stream(seed, 0x9e215471ab1eull);
    PerishState st;
    uint64_t extensions = 0;
    for (uint64_t i = 0; i < simulation_events; ++i) {
        const BlockEvent ev = sample_event(dist, rng);
        if (perishing_extends_public(st, ev)) ++extensions;
        st = perishing_step(st, ev, behavior);
    }
    return {static_cast<double>(extensions) / static_cast<double>(simulation_events),
            GrowthMethod::long_run_simulation};
}

// ---------------------------------------------------------------------------
// Economic analyses built on the simulator.

inline constexpr double kSafeValueCap = 9999.0;

struct SafeValueResult {
    double ratio = kSafeValueCap; // minimum v_t / v_b, two decimals
    bool capped = false;
    double beta = 0.0;
    double successes_per_window = 0.0;
    double block_reward_units = 0.0; // expected adversary block rewards at v_t = 0
};

// Minimum v_t / v_b at which repeatedly running the dual-chain attack beats
// honest mining. Expected attack revenue is affine in v_t:
// R(v_t) = B + S v_t with B, S estimated at v_t = 0, so one repeated-mode
// run per grid point suffices. Returns the cap when settlements are
// statistically indistinguishable from none.
inline SafeValueResult safe_value_threshold(const ExperimentConfig& base, double alpha,
                                            double mu, double beta_star) {
    ExperimentConfig cfg = base;
    cfg.strategy = Strategy::dpc;
    cfg.mode = ExperimentMode::repeated;
    cfg.profile = PowerProfile::from_fractions(alpha, beta_star, mu);
    cfg.economics.double_spend_value_units = 0;
    if (auto err = validate_config(cfg)) throw std::invalid_argument(*err);

    const AggregateStats stats = run_experiment(cfg);
    const double vb = static_cast<double>(cfg.economics.block_reward_units);
    const double honest_units =
        static_cast<double>(cfg.profile.alpha_pm) / kPowerScale * cfg.window * vb;

    SafeValueResult r;
    r.beta = beta_star;
    r.successes_per_window = stats.success_rate;
    r.block_reward_units = stats.mean_adversary_revenue;

    const double s = stats.success_rate;
    if (s <= 0.0 || s < 4.0 * stats.success_rate_stderr) {
        r.capped = true;
        return r;
    }
    const double threshold_units = (honest_units - stats.mean_adversary_revenue) / s;
    double ratio = std::max(0.0, std::ceil(threshold_units * 100.0 / vb) / 100.0);
    if (ratio >= kSafeValueCap) {
        r.capped = true;
        ratio = kSafeValueCap;
    }
    r.ratio = ratio;
    return r;
}

struct RevenueEntry {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct RevenueComparison {
    RevenueEntry honest;
    RevenueEntry selfish;
    RevenueEntry classical_ds;
    RevenueEntry dpc;
    double dpc_beta = 0.0;
};

// Expected adversary revenue per window for each strategy when the attacker
// repeatedly attempts to double spend a transaction worth vt_ratio * v_b.
// Honest mining is the exact proportional formula; the attack strategies are
// simulated, with the dual-chain attack run at its success-maximizing beta.
inline RevenueComparison revenue_comparison(const ExperimentConfig& base, double alpha,
                                            double mu, double vt_ratio) {
    RevenueComparison out;
    ExperimentConfig cfg = base;
    cfg.profile = PowerProfile::from_fractions(alpha, 0.0, mu);
    cfg.economics.double_spend_value_units =
        static_cast<int64_t>(std::llround(vt_ratio * cfg.economics.block_reward_units));
    if (auto err = validate_config(cfg)) throw std::invalid_argument(*err);

    out.honest.mean = static_cast<double>(cfg.profile.alpha_pm) / kPowerScale * cfg.window *
                      static_cast<double>(cfg.economics.block_reward_units);

    {
        ExperimentConfig c = cfg;
        c.strategy = Strategy::selfish;
        const AggregateStats s = run_experiment(c);
        out.selfish = {s.mean_adversary_revenue, s.adversary_revenue_stderr};
    }
    {
        ExperimentConfig c = cfg;
        c.strategy = Strategy::classical_ds;
        c.mode = ExperimentMode::repeated;
        const AggregateStats s = run_experiment(c);
        out.classical_ds = {s.mean_adversary_revenue, s.adversary_revenue_stderr};
    }
    {
        ExperimentConfig search = cfg;
        search.strategy = Strategy::dpc;
        search.mode = ExperimentMode::single_attempt;
        const BestBetaResult b = best_beta(search, alpha, mu);
        out.dpc_beta = b.beta();

        ExperimentConfig c = cfg;
        c.strategy = Strategy::dpc;
        c.mode = ExperimentMode::repeated;
        c.profile.beta_pm = b.beta_pm;
        const AggregateStats s = run_experiment(c);
        out.dpc = {s.mean_adversary_revenue, s.adversary_revenue_stderr};
    }
    return out;
}

} // namespace powsim
