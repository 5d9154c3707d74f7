// Machine-readable report rows: CSV and JSON with identical, deterministic
// number formatting so equal runs produce byte-identical files.
#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace powsim {

struct ReportRow {
    double alpha = 0.0;
    double mu = 0.0;
    double beta = 0.0;
    std::string behavior;
    std::string strategy;
    std::string mode;
    uint64_t trials = 0;
    uint32_t window = 0;
    uint32_t z = 0;
    std::string metric;
    double value = 0.0;
    double stderr_ = 0.0;
    uint64_t seed = 0;
};

inline constexpr const char* kReportHeader =
    "alpha,mu,beta,behavior,strategy,mode,trials,window,z,metric,value,stderr,seed";

// Up to six decimals, trailing zeros trimmed; never locale-dependent.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        size_t last = s.find_last_not_of('0');
        if (s[last] == '.') --last;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
    std::string out(kReportHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += format_number(r.alpha) + ',' + format_number(r.mu) + ',' +
               format_number(r.beta) + ',' + r.behavior + ',' + r.strategy + ',' + r.mode +
               ',' + std::to_string(r.trials) + ',' + std::to_string(r.window) + ',' +
               std::to_string(r.z) + ',' + r.metric + ',' + format_number(r.value) + ',' +
               format_number(r.stderr_) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

// Flat array of objects with the CSV's field names and the same number
// rendering. Hand-rolled so both formats are value-identical byte for byte.
inline std::string to_json(const std::vector<ReportRow>& rows) {
    std::string out = "[\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += "  {\"alpha\": " + format_number(r.alpha) +
               ", \"mu\": " + format_number(r.mu) +
               ", \"beta\": " + format_number(r.beta) +
               ", \"behavior\": \"" + r.behavior +
               "\", \"strategy\": \"" + r.strategy +
               "\", \"mode\": \"" + r.mode +
               "\", \"trials\": " + std::to_string(r.trials) +
               ", \"window\": " + std::to_string(r.window) +
               ", \"z\": " + std::to_string(r.z) +
               ", \"metric\": \"" + r.metric +
               "\", \"value\": " + format_number(r.value) +
               ", \"stderr\": " + format_number(r.stderr_) +
               ", \"seed\": " + std::to_string(r.seed) + "}";
        out += i + 1 < rows.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

inline std::string render_report(const std::vector<ReportRow>& rows, const std::string& format) {
    if (format == "json") return to_json(rows);
    return to_csv(rows);
}

} // namespace powsim
