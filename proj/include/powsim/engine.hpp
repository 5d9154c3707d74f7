// Monte Carlo trial runner: drives the strategy state machines over block-event
// windows, applies reinitialization policies, and aggregates metrics with
// integer accumulators so results are independent of thread count.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "powsim/classical.hpp"
#include "powsim/core.hpp"
#include "powsim/dpc.hpp"
#include "powsim/perishing.hpp"
#include "powsim/selfish.hpp"

namespace powsim {

enum class Strategy { honest, selfish, classical_ds, perishing, dpc };
enum class ExperimentMode { single_attempt, repeated };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::honest: return "honest";
        case Strategy::selfish: return "selfish";
        case Strategy::classical_ds: return "classical_ds";
        case Strategy::perishing: return "perishing";
        case Strategy::dpc: return "dpc";
    }
    return "?";
}

inline const char* to_string(ExperimentMode m) {
    return m == ExperimentMode::single_attempt ? "single_attempt" : "repeated";
}

struct ExperimentConfig {
    uint32_t window = 2016; // block events per trial
    uint32_t trials = 10000;
    uint32_t z = 6; // confirmation depth
    PowerProfile profile{};
    Type2Behavior behavior = Type2Behavior::pessimistic;
    Strategy strategy = Strategy::dpc;
    ExperimentMode mode = ExperimentMode::single_attempt;
    EconomicsConfig economics{};
    double gamma = 0.0; // selfish-mining tie-win fraction
    uint64_t master_seed = 1;
    uint32_t threads = 0; // 0 = hardware concurrency
};

inline std::optional<std::string> validate_config(const ExperimentConfig& c) {
    if (auto err = validate_profile(c.profile)) return err;
    if (c.window < 1) return std::string("window must be >= 1");
    if (c.trials < 1) return std::string("trials must be >= 1");
    if (c.z < 1) return std::string("z must be >= 1");
    if (c.gamma < 0.0 || c.gamma > 1.0) return std::string("gamma out of range: must be in [0, 1]");
    if (c.economics.block_reward_units < 0 || c.economics.double_spend_value_units < 0)
        return std::string("economic values must be non-negative");
    return std::nullopt;
}

struct TrialResult {
    uint32_t success_count = 0;
    uint64_t public_chain_length = 0;
    int64_t adversary_revenue = 0;
    int64_t honest_revenue = 0;
    std::array<uint64_t, 4> blocks_by_party{}; // indexed by BlockEvent
};

struct AggregateStats {
    // Fraction of trials with at least one settlement (single_attempt) or
    // mean settlements per trial (repeated).
    double success_rate = 0.0;
    double success_rate_stderr = 0.0;
    double mean_adversary_revenue = 0.0;
    double adversary_revenue_stderr = 0.0;
    double mean_honest_revenue = 0.0;
    double honest_revenue_stderr = 0.0;
    double relative_growth = 0.0; // mean public-chain blocks per block event
    double relative_growth_stderr = 0.0;
    uint64_t trials = 0;
};

inline bool operator==(const AggregateStats& a, const AggregateStats& b) {
    return a.success_rate == b.success_rate &&
           a.success_rate_stderr == b.success_rate_stderr &&
           a.mean_adversary_revenue == b.mean_adversary_revenue &&
           a.adversary_revenue_stderr == b.adversary_revenue_stderr &&
           a.mean_honest_revenue == b.mean_honest_revenue &&
           a.honest_revenue_stderr == b.honest_revenue_stderr &&
           a.relative_growth == b.relative_growth &&
           a.relative_growth_stderr == b.relative_growth_stderr &&
           a.trials == b.trials;
}

// ---------------------------------------------------------------------------
// Blocks-to-success estimates for the dual-chain reinitialization rule.
// States are abstracted into classes by clamped chain-length differences,
// clamped public depth and the sync flags; estimates plateau beyond the
// clamp so the boundary class stands in for everything deeper.

struct DpcStateClass {
    uint32_t lead1 = 0; // clamp(l_1 - l_pub, 0, clamp)
    int32_t lead2 = 0;  // clamp(l_2 - l_pub, -clamp, clamp)
    uint32_t depth = 0; // min(l_pub, z)
    bool sync_pub_1 = true;
    bool sync_1_2 = true;
};

inline bool operator==(const DpcStateClass& a, const DpcStateClass& b) {
    return a.lead1 == b.lead1 && a.lead2 == b.lead2 && a.depth == b.depth &&
           a.sync_pub_1 == b.sync_pub_1 && a.sync_1_2 == b.sync_1_2;
}

inline constexpr int32_t kDpcClassClamp = 8;
inline constexpr uint32_t kDefaultReinitRollouts = 160;

inline DpcStateClass classify_dpc_state(const DpcState& s, uint32_t z) {
    DpcStateClass c;
    const int64_t d1 = static_cast<int64_t>(s.l_1) - static_cast<int64_t>(s.l_pub);
    const int64_t d2 = static_cast<int64_t>(s.l_2) - static_cast<int64_t>(s.l_pub);
    c.lead1 = static_cast<uint32_t>(std::clamp<int64_t>(d1, 0, kDpcClassClamp));
    c.lead2 = static_cast<int32_t>(std::clamp<int64_t>(d2, -kDpcClassClamp, kDpcClassClamp));
    c.depth = static_cast<uint32_t>(std::min<uint64_t>(s.l_pub, z));
    c.sync_pub_1 = s.sync_pub_1;
    c.sync_1_2 = s.sync_1_2;
    return c;
}

// A concrete state representing the class; chain-2 composition is irrelevant
// for the event count so all its blocks are attributed to the adversary.
inline DpcState representative_dpc_state(const DpcStateClass& c) {
    DpcState s;
    s.l_pub = c.depth;
    s.l_1 = c.depth + c.lead1;
    const int64_t l2 = static_cast<int64_t>(c.depth) + c.lead2;
    s.l_2 = l2 < 0 ? 0 : static_cast<uint64_t>(l2);
    if (c.sync_1_2) s.l_2 = s.l_1;
    s.sync_pub_1 = c.sync_pub_1;
    s.sync_1_2 = c.sync_1_2;
    s.adv_blocks_on_2 = s.l_2;
    return s;
}

struct BlocksToSuccessTable {
    uint32_t z = 6;
    uint32_t rollouts = 0;
    // Indexed by encode(); NaN marks classes that cannot occur.
    std::vector<double> estimates;
    double initial_estimate = 0.0;

    size_t encode(const DpcStateClass& c) const {
        const size_t flags = (c.sync_pub_1 ? 2u : 0u) | (c.sync_1_2 ? 1u : 0u);
        const size_t l2 = static_cast<size_t>(c.lead2 + kDpcClassClamp);
        return ((c.lead1 * (2 * kDpcClassClamp + 1) + l2) * (z + 1) + c.depth) * 4 + flags;
    }

    size_t size() const {
        return static_cast<size_t>(kDpcClassClamp + 1) * (2 * kDpcClassClamp + 1) * (z + 1) * 4;
    }

    double estimate_for(const DpcState& s) const {
        return estimates.at(encode(classify_dpc_state(s, z)));
    }
};

// Restart the attack when the estimated distance to success from the current
// state exceeds the estimate from a fresh start.
inline bool should_reinitialize_dpc(const DpcState& s, const BlocksToSuccessTable& table) {
    const double current = table.estimate_for(s);
    if (std::isnan(current) || std::isnan(table.initial_estimate))
        throw std::logic_error("should_reinitialize_dpc: no estimate for state class; "
                               "build the blocks-to-success table first");
    return current > table.initial_estimate;
}

namespace detail {

// Mean block events until settlement starting from `start`, over `rollouts`
// independent continuations, each capped at `window` events (capped runs
// count the cap, biasing hopeless classes low, which never makes the
// attacker abandon a viable state).
inline double rollout_blocks_to_success(const DpcState& start, const ExperimentConfig& cfg,
                                        uint32_t rollouts, uint64_t stream_base) {
    if (start.l_2 >= start.l_pub && start.l_pub >= cfg.z) return 0.0;
    const EventDistribution split =
        event_distribution(cfg.profile, MiningAllocation::split_across_both_chains);
    const EventDistribution all2 =
        event_distribution(cfg.profile, MiningAllocation::all_on_chain2);
    uint64_t total = 0;
    for (uint32_t r = 0; r < rollouts; ++r) {
        Rng rng = Rng::for_stream(cfg.master_seed ^ 0xb10c5e71ab1eull, stream_base + r);
        DpcState st = start;
        uint32_t events = 0;
        while (events < cfg.window) {
            const BlockEvent ev = sample_event(st.sync_pub_1 ? split : all2, rng);
            const StepOutcome out = dpc_step(st, ev, cfg.behavior, cfg.z, cfg.economics);
            ++events;
            if (out.double_spend_succeeded) break;
            st = out.next_state;
        }
        total += events;
    }
    return static_cast<double>(total) / rollouts;
}

inline bool class_is_consistent(const DpcStateClass& c, Type2Behavior behavior) {
    if (c.sync_pub_1 && c.lead1 != 0) return false;
    if (c.sync_1_2 && c.lead2 != static_cast<int32_t>(c.lead1)) return false;
    // A negative depth + lead2 still occurs through clamping when the public
    // chain is deeper than z, so such classes stay in the table.
    if (behavior == Type2Behavior::optimistic) {
        if (c.lead2 > static_cast<int32_t>(c.lead1)) return false;
        if (c.sync_pub_1 && !c.sync_1_2 && c.lead2 > 0) return false;
    } else {
        if (c.lead1 > 1) return false;
        if (!c.sync_pub_1 && c.lead1 == 0) return false;
    }
    return true;
}

} // namespace detail

// Estimate for a single state class; exposed for targeted queries and tests.
inline double estimate_blocks_to_success(const DpcStateClass& c, const ExperimentConfig& cfg,
                                         uint32_t rollouts) {
    BlocksToSuccessTable idx;
    idx.z = cfg.z;
    return detail::rollout_blocks_to_success(representative_dpc_state(c), cfg, rollouts,
                                             static_cast<uint64_t>(idx.encode(c)) << 32);
}

inline BlocksToSuccessTable build_blocks_to_success_table(
    const ExperimentConfig& cfg, uint32_t rollouts = kDefaultReinitRollouts) {
    BlocksToSuccessTable table;
    table.z = cfg.z;
    table.rollouts = rollouts;
    table.estimates.assign(table.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<DpcStateClass> classes;
    for (uint32_t lead1 = 0; lead1 <= kDpcClassClamp; ++lead1)
        for (int32_t lead2 = -kDpcClassClamp; lead2 <= kDpcClassClamp; ++lead2)
            for (uint32_t depth = 0; depth <= cfg.z; ++depth)
                for (int flags = 0; flags < 4; ++flags) {
                    DpcStateClass c{lead1, lead2, depth, (flags & 2) != 0, (flags & 1) != 0};
                    if (detail::class_is_consistent(c, cfg.behavior)) classes.push_back(c);
                }

    const uint32_t workers =
        std::max<uint32_t>(1, std::min<uint32_t>(cfg.threads ? cfg.threads
                                                             : std::thread::hardware_concurrency(),
                                                 static_cast<uint32_t>(classes.size())));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (uint32_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = w; i < classes.size(); i += workers) {
                    const size_t slot = table.encode(classes[i]);
                    table.estimates[slot] = detail::rollout_blocks_to_success(
                        representative_dpc_state(classes[i]), cfg, rollouts,
                        static_cast<uint64_t>(slot) << 32);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    table.initial_estimate =
        table.estimates.at(table.encode(classify_dpc_state(dpc_init_state(), cfg.z)));
    return table;
}

// ---------------------------------------------------------------------------
// Trial execution

namespace detail {

inline SimplifiedEvent simplify(BlockEvent ev) {
    return (ev == BlockEvent::adversary_chain1 || ev == BlockEvent::adversary_chain2)
               ? SimplifiedEvent::adversary
               : SimplifiedEvent::honest;
}

} // namespace detail

// One simulated window of block events. Deterministic in
// (config.master_seed, trial_index); trials never share generator state.
// Repeated-mode dual-chain trials need a prebuilt blocks-to-success table.
inline TrialResult run_trial(const ExperimentConfig& cfg, uint64_t trial_index,
                             const BlocksToSuccessTable* reinit_table = nullptr) {
    Rng rng = Rng::for_stream(cfg.master_seed, trial_index);
    TrialResult res;
    const int64_t vb = cfg.economics.block_reward_units;
    const int64_t vt = cfg.economics.double_spend_value_units;
    const bool repeated = cfg.mode == ExperimentMode::repeated;

    const EventDistribution base_dist =
        event_distribution(cfg.profile, cfg.strategy == Strategy::classical_ds
                                            ? MiningAllocation::all_on_chain2
                                            : MiningAllocation::all_on_chain1);

    switch (cfg.strategy) {
        case Strategy::honest: {
            for (uint32_t i = 0; i < cfg.window; ++i) {
                const BlockEvent ev = sample_event(base_dist, rng);
                res.blocks_by_party[static_cast<size_t>(ev)] += 1;
                res.public_chain_length += 1;
                if (detail::simplify(ev) == SimplifiedEvent::adversary)
                    res.adversary_revenue += vb;
                else
                    res.honest_revenue += vb;
            }
            break;
        }
        case Strategy::selfish: {
            SelfishState st;
            uint64_t adv_accepted = 0, honest_accepted = 0;
            for (uint32_t i = 0; i < cfg.window; ++i) {
                const BlockEvent ev = sample_event(base_dist, rng);
                res.blocks_by_party[static_cast<size_t>(ev)] += 1;
                const SelfishStepResult r =
                    selfish_step(st, detail::simplify(ev), cfg.gamma, rng);
                st = r.next;
                res.public_chain_length += r.public_blocks_appended;
                adv_accepted += r.adversary_blocks_accepted;
                honest_accepted += r.honest_blocks_accepted;
            }
            // Blocks still withheld or racing when the window closes are
            // never published and pay nothing.
            res.adversary_revenue = static_cast<int64_t>(adv_accepted) * vb;
            res.honest_revenue = static_cast<int64_t>(honest_accepted) * vb;
            break;
        }
        case Strategy::classical_ds: {
            ClassicalDsState st;
            bool attack_over = false;
            for (uint32_t i = 0; i < cfg.window; ++i) {
                const BlockEvent ev = sample_event(base_dist, rng);
                res.blocks_by_party[static_cast<size_t>(ev)] += 1;
                const SimplifiedEvent se = detail::simplify(ev);
                if (attack_over) {
                    res.public_chain_length += 1;
                    (se == SimplifiedEvent::adversary ? res.adversary_revenue
                                                      : res.honest_revenue) += vb;
                    continue;
                }
                const ClassicalStepResult r = classical_ds_step(st, se, cfg.z);
                st = r.next;
                if (se == SimplifiedEvent::honest) {
                    res.public_chain_length += 1;
                    res.honest_revenue += vb;
                }
                if (r.succeeded) {
                    res.success_count += 1;
                    res.adversary_revenue += static_cast<int64_t>(st.l_attacker) * vb + vt;
                    res.honest_revenue -= static_cast<int64_t>(st.l_public) * vb;
                    res.public_chain_length += st.l_attacker - st.l_public;
                    if (repeated)
                        st = ClassicalDsState{};
                    else
                        attack_over = true;
                } else if (repeated && should_reinitialize_classical(st)) {
                    st = ClassicalDsState{};
                }
            }
            break;
        }
        case Strategy::perishing: {
            PerishState st;
            for (uint32_t i = 0; i < cfg.window; ++i) {
                const BlockEvent ev = sample_event(base_dist, rng);
                res.blocks_by_party[static_cast<size_t>(ev)] += 1;
                if (perishing_extends_public(st, ev)) {
                    res.public_chain_length += 1;
                    res.honest_revenue += vb;
                }
                st = perishing_step(st, ev, cfg.behavior);
            }
            break;
        }
        case Strategy::dpc: {
            if (repeated && reinit_table == nullptr)
                throw std::logic_error(
                    "run_trial: repeated-mode dual-chain trials need a blocks-to-success "
                    "table; build it first");
            const EventDistribution split =
                event_distribution(cfg.profile, MiningAllocation::split_across_both_chains);
            const EventDistribution all2 =
                event_distribution(cfg.profile, MiningAllocation::all_on_chain2);
            DpcState st = dpc_init_state();
            bool attack_over = false;
            for (uint32_t i = 0; i < cfg.window; ++i) {
                const EventDistribution& dist = attack_over ? base_dist
                                                : (dpc_allocation(st) ==
                                                           MiningAllocation::split_across_both_chains
                                                       ? split
                                                       : all2);
                const BlockEvent ev = sample_event(dist, rng);
                res.blocks_by_party[static_cast<size_t>(ev)] += 1;
                if (attack_over) {
                    res.public_chain_length += 1;
                    (detail::simplify(ev) == SimplifiedEvent::adversary
                         ? res.adversary_revenue
                         : res.honest_revenue) += vb;
                    continue;
                }
                const StepOutcome out = dpc_step(st, ev, cfg.behavior, cfg.z, cfg.economics);
                res.adversary_revenue += out.adversary_reward_delta;
                res.honest_revenue += out.honest_reward_delta;
                res.public_chain_length += out.public_chain_delta;
                st = out.next_state;
                if (out.double_spend_succeeded) {
                    res.success_count += 1;
                    if (!repeated) attack_over = true;
                } else if (repeated && should_reinitialize_dpc(st, *reinit_table)) {
                    st = dpc_init_state();
                }
            }
            break;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace detail {

struct TrialSums {
    uint64_t trials_with_success = 0;
    uint64_t success_total = 0;
    uint64_t success_sq = 0;
    int64_t adv_sum = 0;
    int64_t adv_sq = 0;
    int64_t honest_sum = 0;
    int64_t honest_sq = 0;
    uint64_t publen_sum = 0;
    uint64_t publen_sq = 0;

    void add(const TrialResult& r) {
        trials_with_success += r.success_count > 0 ? 1 : 0;
        success_total += r.success_count;
        success_sq += static_cast<uint64_t>(r.success_count) * r.success_count;
        adv_sum += r.adversary_revenue;
        adv_sq += r.adversary_revenue * r.adversary_revenue;
        honest_sum += r.honest_revenue;
        honest_sq += r.honest_revenue * r.honest_revenue;
        publen_sum += r.public_chain_length;
        publen_sq += r.public_chain_length * r.public_chain_length;
    }

    void merge(const TrialSums& o) {
        trials_with_success += o.trials_with_success;
        success_total += o.success_total;
        success_sq += o.success_sq;
        adv_sum += o.adv_sum;
        adv_sq += o.adv_sq;
        honest_sum += o.honest_sum;
        honest_sq += o.honest_sq;
        publen_sum += o.publen_sum;
        publen_sq += o.publen_sq;
    }
};

inline double stderr_of_mean(double sum, double sum_sq, double n) {
    if (n <= 1) return 0.0;
    const double mean = sum / n;
    double var = (sum_sq - n * mean * mean) / (n - 1);
    if (var < 0) var = 0;
    return std::sqrt(var / n);
}

} // namespace detail

// Runs all trials and folds the per-trial integers; the result is identical
// for any thread count because only exact sums cross thread boundaries.
inline AggregateStats run_experiment(const ExperimentConfig& cfg) {
    if (auto err = validate_config(cfg)) throw std::invalid_argument(*err);

    std::optional<BlocksToSuccessTable> table;
    if (cfg.strategy == Strategy::dpc && cfg.mode == ExperimentMode::repeated)
        table = build_blocks_to_success_table(cfg);
    const BlocksToSuccessTable* table_ptr = table ? &*table : nullptr;

    const uint32_t workers = std::max<uint32_t>(
        1, std::min<uint32_t>(cfg.threads ? cfg.threads : std::thread::hardware_concurrency(),
                              cfg.trials));

    std::vector<detail::TrialSums> partial(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (uint32_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                detail::TrialSums local;
                for (uint64_t i = w; i < cfg.trials; i += workers)
                    local.add(run_trial(cfg, i, table_ptr));
                partial[w] = local;
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    detail::TrialSums sums;
    for (const auto& p : partial) sums.merge(p);

    const double n = static_cast<double>(cfg.trials);
    AggregateStats out;
    out.trials = cfg.trials;
    if (cfg.mode == ExperimentMode::single_attempt) {
        const double p = static_cast<double>(sums.trials_with_success) / n;
        out.success_rate = p;
        out.success_rate_stderr = std::sqrt(p * (1.0 - p) / n);
    } else {
        out.success_rate = static_cast<double>(sums.success_total) / n;
        out.success_rate_stderr = detail::stderr_of_mean(
            static_cast<double>(sums.success_total), static_cast<double>(sums.success_sq), n);
    }
    out.mean_adversary_revenue = static_cast<double>(sums.adv_sum) / n;
    out.adversary_revenue_stderr = detail::stderr_of_mean(
        static_cast<double>(sums.adv_sum), static_cast<double>(sums.adv_sq), n);
    out.mean_honest_revenue = static_cast<double>(sums.honest_sum) / n;
    out.honest_revenue_stderr = detail::stderr_of_mean(
        static_cast<double>(sums.honest_sum), static_cast<double>(sums.honest_sq), n);
    out.relative_growth = static_cast<double>(sums.publen_sum) / (n * cfg.window);
    out.relative_growth_stderr =
        detail::stderr_of_mean(static_cast<double>(sums.publen_sum),
                               static_cast<double>(sums.publen_sq), n) /
        cfg.window;
    return out;
}

// ---------------------------------------------------------------------------
// Parameter sweeps and the beta search

struct SweepRow {
    double alpha = 0.0;
    double mu = 0.0;
    double beta = 0.0;
    bool ok = false;
    AggregateStats stats{};
    std::string error;
};

// One row per grid point in ascending (alpha, mu, beta) order. Grid points
// with invalid profiles are reported in place and do not stop the sweep.
inline std::vector<SweepRow> sweep(const ExperimentConfig& base, std::vector<double> alphas,
                                   std::vector<double> mus, std::vector<double> betas) {
    std::sort(alphas.begin(), alphas.end());
    std::sort(mus.begin(), mus.end());
    std::sort(betas.begin(), betas.end());
    std::vector<SweepRow> rows;
    for (double a : alphas)
        for (double m : mus)
            for (double b : betas) {
                SweepRow row;
                row.alpha = a;
                row.mu = m;
                row.beta = b;
                ExperimentConfig cfg = base;
                cfg.profile = PowerProfile::from_fractions(a, b, m);
                if (auto err = validate_config(cfg)) {
                    row.error = *err;
                } else {
                    row.stats = run_experiment(cfg);
                    row.ok = true;
                }
                rows.push_back(std::move(row));
            }
    return rows;
}

struct BestBetaOptions {
    uint32_t coarse_step_pm = 50; // 0.05 pre-pass
    uint32_t fine_step_pm = 10;   // 0.01 grid
    uint32_t fine_radius_pm = 40;
};

struct BestBetaResult {
    uint32_t beta_pm = 0;
    AggregateStats stats{};

    double beta() const { return static_cast<double>(beta_pm) / kPowerScale; }
};

// Argmax of the success rate over the beta grid, ties toward smaller beta.
// A coarse pre-pass narrows the window before the 0.01-step scan.
inline BestBetaResult best_beta(const ExperimentConfig& base, double alpha, double mu,
                                const BestBetaOptions& opts = {}) {
    ExperimentConfig cfg = base;
    cfg.profile = PowerProfile::from_fractions(alpha, 0.0, mu);
    if (auto err = validate_config(cfg)) throw std::invalid_argument(*err);

    std::vector<std::optional<AggregateStats>> evaluated(kPowerScale + 1);
    auto evaluate = [&](uint32_t beta_pm) -> const AggregateStats& {
        if (!evaluated[beta_pm]) {
            ExperimentConfig point = cfg;
            point.profile.beta_pm = beta_pm;
            evaluated[beta_pm] = run_experiment(point);
        }
        return *evaluated[beta_pm];
    };

    uint32_t best = 0;
    for (uint32_t b = 0; b <= kPowerScale; b += opts.coarse_step_pm) {
        if (evaluate(b).success_rate > evaluate(best).success_rate) best = b;
    }
    const uint32_t lo = best > opts.fine_radius_pm ? best - opts.fine_radius_pm : 0;
    const uint32_t hi = std::min(best + opts.fine_radius_pm, kPowerScale);
    for (uint32_t b = lo; b <= hi; b += opts.fine_step_pm) {
        if (evaluate(b).success_rate > evaluate(best).success_rate) best = b;
    }

    BestBetaResult result;
    result.beta_pm = best;
    result.stats = evaluate(best);
    return result;
}

} // namespace powsim
