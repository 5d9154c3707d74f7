// Flat key=value configuration files ('#' starts a comment) and their
// application to an ExperimentConfig. Command-line flags override file keys.
#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "powsim/engine.hpp"

namespace powsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& value) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("unparsable value for key '" + key + "': " + value);
    }
    if (pos != value.size())
        throw ConfigError("unparsable value for key '" + key + "': " + value);
    return v;
}

inline uint64_t parse_u64(const std::string& key, const std::string& value) {
    size_t pos = 0;
    uint64_t v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("unparsable value for key '" + key + "': " + value);
    }
    if (pos != value.size())
        throw ConfigError("unparsable value for key '" + key + "': " + value);
    return v;
}

} // namespace detail

inline Type2Behavior parse_behavior(const std::string& v) {
    if (v == "optimistic") return Type2Behavior::optimistic;
    if (v == "pessimistic") return Type2Behavior::pessimistic;
    throw ConfigError("unknown behavior '" + v + "' (expected optimistic|pessimistic)");
}

inline Strategy parse_strategy(const std::string& v) {
    if (v == "honest") return Strategy::honest;
    if (v == "selfish") return Strategy::selfish;
    if (v == "classical-ds" || v == "classical_ds") return Strategy::classical_ds;
    if (v == "perishing") return Strategy::perishing;
    if (v == "dpc") return Strategy::dpc;
    throw ConfigError("unknown strategy '" + v +
                      "' (expected honest|selfish|classical-ds|perishing|dpc)");
}

inline ExperimentMode parse_mode(const std::string& v) {
    if (v == "single_attempt") return ExperimentMode::single_attempt;
    if (v == "repeated") return ExperimentMode::repeated;
    throw ConfigError("unknown mode '" + v + "' (expected single_attempt|repeated)");
}

// Applies one key to the config; throws ConfigError naming the key on any
// unknown key or unparsable value.
inline void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
    auto pm = [&](double v) {
        return static_cast<uint32_t>(std::llround(v * kPowerScale));
    };
    if (key == "alpha") cfg.profile.alpha_pm = pm(detail::parse_double(key, value));
    else if (key == "beta") cfg.profile.beta_pm = pm(detail::parse_double(key, value));
    else if (key == "mu") cfg.profile.mu_pm = pm(detail::parse_double(key, value));
    else if (key == "behavior") cfg.behavior = parse_behavior(value);
    else if (key == "strategy") cfg.strategy = parse_strategy(value);
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "trials") cfg.trials = static_cast<uint32_t>(detail::parse_u64(key, value));
    else if (key == "window") cfg.window = static_cast<uint32_t>(detail::parse_u64(key, value));
    else if (key == "z") cfg.z = static_cast<uint32_t>(detail::parse_u64(key, value));
    else if (key == "vt_ratio")
        cfg.economics.double_spend_value_units = static_cast<int64_t>(
            std::llround(detail::parse_double(key, value) * cfg.economics.block_reward_units));
    else if (key == "gamma") cfg.gamma = detail::parse_double(key, value);
    else if (key == "seed") cfg.master_seed = detail::parse_u64(key, value);
    else if (key == "threads") cfg.threads = static_cast<uint32_t>(detail::parse_u64(key, value));
    else throw ConfigError("unknown key '" + key + "'");
}

// Parses a key=value document into the config. Errors carry the line number
// and key name.
inline void apply_config_text(ExperimentConfig& cfg, std::istream& in,
                              const std::string& origin) {
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        try {
            apply_config_key(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    apply_config_text(cfg, in, path);
}

// Serialization that apply_config_text maps back to the same config.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "alpha=" << cfg.profile.alpha() << "\n"
        << "beta=" << cfg.profile.beta() << "\n"
        << "mu=" << cfg.profile.mu() << "\n"
        << "behavior=" << to_string(cfg.behavior) << "\n"
        << "strategy=" << to_string(cfg.strategy) << "\n"
        << "mode=" << to_string(cfg.mode) << "\n"
        << "trials=" << cfg.trials << "\n"
        << "window=" << cfg.window << "\n"
        << "z=" << cfg.z << "\n"
        << "vt_ratio=" << cfg.economics.vt_ratio() << "\n"
        << "gamma=" << cfg.gamma << "\n"
        << "seed=" << cfg.master_seed << "\n"
        << "threads=" << cfg.threads << "\n";
    return out.str();
}

} // namespace powsim
