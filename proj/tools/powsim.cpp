// Command-line front end: configures experiments, dispatches the engine and
// analytics, and emits CSV/JSON report rows.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "powsim/analytics.hpp"
#include "powsim/config_file.hpp"
#include "powsim/engine.hpp"
#include "powsim/report.hpp"

namespace {

using namespace powsim;

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) continue;
        values.push_back(detail::parse_double(flag, item));
    }
    if (values.empty()) throw ConfigError("no values given for " + flag);
    return values;
}

struct CliOptions {
    std::string config_path;
    std::string alpha_list, mu_list, beta_list, q_list;
    bool use_best_beta = false;
    std::string behavior, strategy, mode;
    uint64_t trials = 0, seed = 0;
    uint32_t window = 0, z = 0, threads = 0;
    double vt_ratio = 0.0, gamma = 0.0;
    std::string format = "csv";
    std::string output = "-";

    // Option pointers so only user-provided flags override file keys.
    CLI::Option *alpha_opt = nullptr, *mu_opt = nullptr, *beta_opt = nullptr, *q_opt = nullptr;
    CLI::Option *behavior_opt = nullptr, *strategy_opt = nullptr, *trials_opt = nullptr;
    CLI::Option *window_opt = nullptr, *z_opt = nullptr, *vt_opt = nullptr, *gamma_opt = nullptr;
    CLI::Option *seed_opt = nullptr, *threads_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--config", o.config_path, "key=value config file; flags override file keys");
    o.alpha_opt = cmd->add_option("--alpha", o.alpha_list,
                                  "adversary hash share (comma list for grids)");
    o.mu_opt = cmd->add_option("--mu", o.mu_list, "type 2 hash share (comma list for grids)");
    o.beta_opt = cmd->add_option("--beta", o.beta_list,
                                 "distraction-chain power share (comma list for grids)");
    cmd->add_flag("--best-beta", o.use_best_beta,
                  "search the 0.01-step beta grid for the best success rate");
    o.behavior_opt =
        cmd->add_option("--behavior", o.behavior, "type 2 behavior: optimistic|pessimistic");
    o.strategy_opt = cmd->add_option(
        "--strategy", o.strategy, "honest|selfish|classical-ds|perishing|dpc");
    o.trials_opt = cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
    o.window_opt = cmd->add_option("--window", o.window, "block events per trial");
    o.z_opt = cmd->add_option("--z", o.z, "confirmation depth");
    o.vt_opt = cmd->add_option("--vt-ratio", o.vt_ratio, "double-spent value as a multiple of v_b");
    o.gamma_opt = cmd->add_option("--gamma", o.gamma, "selfish-mining tie-win fraction");
    o.seed_opt = cmd->add_option("--seed", o.seed, "master seed (reports are reproducible from it)");
    o.threads_opt = cmd->add_option("--threads", o.threads, "engine thread bound (0 = auto)");
    cmd->add_option("--format", o.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", o.output, "output path ('-' = stdout)");
}

// Defaults, then config file, then explicitly passed flags.
ExperimentConfig build_config(const CliOptions& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) apply_config_file(cfg, o.config_path);
    if (o.behavior_opt->count()) cfg.behavior = parse_behavior(o.behavior);
    if (o.strategy_opt->count()) cfg.strategy = parse_strategy(o.strategy);
    if (o.trials_opt->count()) cfg.trials = static_cast<uint32_t>(o.trials);
    if (o.window_opt->count()) cfg.window = o.window;
    if (o.z_opt->count()) cfg.z = o.z;
    if (o.vt_opt->count())
        cfg.economics.double_spend_value_units =
            static_cast<int64_t>(std::llround(o.vt_ratio * cfg.economics.block_reward_units));
    if (o.gamma_opt->count()) cfg.gamma = o.gamma;
    if (o.seed_opt->count()) cfg.master_seed = o.seed;
    if (o.threads_opt->count()) cfg.threads = o.threads;
    return cfg;
}

std::vector<double> grid_or(const CLI::Option* opt, const std::string& list,
                            const std::string& flag, double fallback) {
    if (opt->count()) return parse_list(list, flag);
    return {fallback};
}

ReportRow base_row(const ExperimentConfig& cfg, double alpha, double mu, double beta) {
    ReportRow r;
    r.alpha = alpha;
    r.mu = mu;
    r.beta = beta;
    r.behavior = to_string(cfg.behavior);
    r.strategy = to_string(cfg.strategy);
    r.mode = to_string(cfg.mode);
    r.trials = cfg.trials;
    r.window = cfg.window;
    r.z = cfg.z;
    r.seed = cfg.master_seed;
    return r;
}

void write_output(const std::vector<ReportRow>& rows, const CliOptions& o) {
    const std::string text = render_report(rows, o.format);
    if (o.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + o.output);
    out << text;
    if (!out) throw std::runtime_error("error writing output file: " + o.output);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator and analytic toolkit for proof-of-work "
                 "block-withholding and double-spending attacks"};
    app.require_subcommand(1);

    CliOptions o;
    CLI::App* growth = app.add_subcommand(
        "growth", "relative public-chain growth rate under an attack strategy");
    CLI::App* success = app.add_subcommand(
        "success", "double-spend success rate (one attempt per window)");
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "grid sweep over alpha, mu and beta");
    CLI::App* bestbeta = app.add_subcommand(
        "best-beta", "success-maximizing beta for each (alpha, mu)");
    CLI::App* safevalue = app.add_subcommand(
        "safe-value", "minimum v_t/v_b making the dual-chain attack beat honest mining");
    CLI::App* revenue = app.add_subcommand(
        "revenue", "expected revenue per window for each strategy");
    CLI::App* analytic = app.add_subcommand(
        "analytic-growth", "matrix-based growth rate of the distraction strategy");
    CLI::App* formulas = app.add_subcommand(
        "formulas", "closed-form catch-up probabilities");
    for (CLI::App* cmd : {growth, success, sweep_cmd, bestbeta, safevalue, revenue,
                          analytic, formulas})
        add_common_options(cmd, o);
    o.q_opt = formulas->add_option("--q", o.q_list,
                                   "attacker hash share for the formulas (comma list)");

    CLI11_PARSE(app, argc, argv);

    // Re-point the option handles at the subcommand that actually parsed, so
    // count() reflects what the user passed.
    CLI::App* parsed = app.get_subcommands().front();
    o.alpha_opt = parsed->get_option("--alpha");
    o.mu_opt = parsed->get_option("--mu");
    o.beta_opt = parsed->get_option("--beta");
    o.behavior_opt = parsed->get_option("--behavior");
    o.strategy_opt = parsed->get_option("--strategy");
    o.trials_opt = parsed->get_option("--trials");
    o.window_opt = parsed->get_option("--window");
    o.z_opt = parsed->get_option("--z");
    o.vt_opt = parsed->get_option("--vt-ratio");
    o.gamma_opt = parsed->get_option("--gamma");
    o.seed_opt = parsed->get_option("--seed");
    o.threads_opt = parsed->get_option("--threads");

    ExperimentConfig cfg = build_config(o);
    std::vector<ReportRow> rows;

    if (growth->parsed()) {
        if (!o.strategy_opt->count()) cfg.strategy = Strategy::perishing;
        cfg.mode = ExperimentMode::single_attempt;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                ExperimentConfig c = cfg;
                c.profile = PowerProfile::from_fractions(a, cfg.profile.beta(), m);
                if (auto err = validate_config(c)) throw std::invalid_argument(*err);
                const AggregateStats s = run_experiment(c);
                ReportRow r = base_row(c, a, m, c.profile.beta());
                r.metric = "relative_growth";
                r.value = s.relative_growth;
                r.stderr_ = s.relative_growth_stderr;
                rows.push_back(r);
            }
    } else if (success->parsed() || sweep_cmd->parsed()) {
        if (!o.strategy_opt->count()) cfg.strategy = Strategy::dpc;
        cfg.mode = ExperimentMode::single_attempt;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                if (o.use_best_beta) {
                    const BestBetaResult b = best_beta(cfg, a, m);
                    ReportRow r = base_row(cfg, a, m, b.beta());
                    r.metric = "success_rate";
                    r.value = b.stats.success_rate;
                    r.stderr_ = b.stats.success_rate_stderr;
                    rows.push_back(r);
                    continue;
                }
                for (double bta :
                     grid_or(o.beta_opt, o.beta_list, "--beta", cfg.profile.beta())) {
                    ExperimentConfig c = cfg;
                    c.profile = PowerProfile::from_fractions(a, bta, m);
                    if (auto err = validate_config(c)) throw std::invalid_argument(*err);
                    const AggregateStats s = run_experiment(c);
                    ReportRow r = base_row(c, a, m, bta);
                    r.metric = "success_rate";
                    r.value = s.success_rate;
                    r.stderr_ = s.success_rate_stderr;
                    rows.push_back(r);
                    if (sweep_cmd->parsed()) {
                        ReportRow g = r;
                        g.metric = "relative_growth";
                        g.value = s.relative_growth;
                        g.stderr_ = s.relative_growth_stderr;
                        rows.push_back(g);
                    }
                }
            }
    } else if (bestbeta->parsed()) {
        cfg.strategy = Strategy::dpc;
        cfg.mode = ExperimentMode::single_attempt;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                const BestBetaResult b = best_beta(cfg, a, m);
                ReportRow r = base_row(cfg, a, m, b.beta());
                r.metric = "best_beta";
                r.value = b.beta();
                rows.push_back(r);
                r.metric = "success_rate";
                r.value = b.stats.success_rate;
                r.stderr_ = b.stats.success_rate_stderr;
                rows.push_back(r);
            }
    } else if (safevalue->parsed()) {
        cfg.strategy = Strategy::dpc;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                ExperimentConfig search = cfg;
                search.mode = ExperimentMode::single_attempt;
                const BestBetaResult b = best_beta(search, a, m);
                const SafeValueResult sv = safe_value_threshold(cfg, a, m, b.beta());
                ExperimentConfig c = cfg;
                c.mode = ExperimentMode::repeated;
                ReportRow r = base_row(c, a, m, sv.beta);
                r.metric = "safe_value_ratio";
                r.value = sv.ratio;
                rows.push_back(r);
            }
    } else if (revenue->parsed()) {
        cfg.mode = ExperimentMode::repeated;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                const RevenueComparison rc =
                    revenue_comparison(cfg, a, m, cfg.economics.vt_ratio());
                const std::pair<const char*, RevenueEntry> entries[] = {
                    {"honest", rc.honest},
                    {"selfish", rc.selfish},
                    {"classical_ds", rc.classical_ds},
                    {"dpc", rc.dpc},
                };
                for (const auto& [name, e] : entries) {
                    ReportRow r = base_row(cfg, a, m, name == std::string("dpc") ? rc.dpc_beta : 0.0);
                    r.strategy = name;
                    r.metric = "expected_revenue";
                    r.value = e.mean;
                    r.stderr_ = e.stderr_;
                    rows.push_back(r);
                }
            }
    } else if (analytic->parsed()) {
        cfg.strategy = Strategy::perishing;
        for (double a : grid_or(o.alpha_opt, o.alpha_list, "--alpha", cfg.profile.alpha()))
            for (double m : grid_or(o.mu_opt, o.mu_list, "--mu", cfg.profile.mu())) {
                const PowerProfile p = PowerProfile::from_fractions(a, 0.0, m);
                require_valid(p);
                const GrowthEstimate g =
                    analytic_growth_rate(p, cfg.behavior, 200, 10'000'000, cfg.master_seed);
                ReportRow r = base_row(cfg, a, m, 0.0);
                r.trials = 0;
                r.metric = std::string("analytic_growth_") + to_string(g.method);
                r.value = g.value;
                rows.push_back(r);
            }
    } else if (formulas->parsed()) {
        const std::string source = o.q_opt->count() ? o.q_list : o.alpha_list;
        if (!o.q_opt->count() && !o.alpha_opt->count())
            throw ConfigError("formulas needs --q (or --alpha)");
        cfg.strategy = Strategy::classical_ds;
        for (double q : parse_list(source, "--q")) {
            ReportRow r = base_row(cfg, q, 0.0, 0.0);
            r.trials = 0;
            r.window = 0;
            r.metric = "nakamoto_probability";
            r.value = nakamoto_probability(q, cfg.z);
            rows.push_back(r);
            r.metric = "rosenfeld_probability";
            r.value = rosenfeld_probability(q, cfg.z);
            rows.push_back(r);
        }
    }

    write_output(rows, o);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const powsim::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
