// Declarative experiment configs: one key = value file per experiment,
// lists comma separated, '#' starts a comment. Command-line flags and
// the CATLAB_SEED environment variable override file values.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "catlab/common.hpp"

namespace catlab {

enum class ExperimentKind { fig3, fig4, table3, fig6, fig7, fig9, lemma1_check, thm3_check };
enum class ChannelKind { dephasing, amplitude_damping, depolarizing };

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline ExperimentKind parse_experiment(const std::string& s) {
    if (s == "fig3") return ExperimentKind::fig3;
    if (s == "fig4") return ExperimentKind::fig4;
    if (s == "table3") return ExperimentKind::table3;
    if (s == "fig6") return ExperimentKind::fig6;
    if (s == "fig7") return ExperimentKind::fig7;
    if (s == "fig9") return ExperimentKind::fig9;
    if (s == "lemma1-check") return ExperimentKind::lemma1_check;
    if (s == "thm3-check") return ExperimentKind::thm3_check;
    throw ConfigError("experiment: unknown value '" + s + "'");
}

inline const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::fig3: return "fig3";
        case ExperimentKind::fig4: return "fig4";
        case ExperimentKind::table3: return "table3";
        case ExperimentKind::fig6: return "fig6";
        case ExperimentKind::fig7: return "fig7";
        case ExperimentKind::fig9: return "fig9";
        case ExperimentKind::lemma1_check: return "lemma1-check";
        case ExperimentKind::thm3_check: return "thm3-check";
    }
    return "?";
}

inline ChannelKind parse_channel(const std::string& s) {
    if (s == "dephasing") return ChannelKind::dephasing;
    if (s == "amplitude_damping") return ChannelKind::amplitude_damping;
    if (s == "depolarizing") return ChannelKind::depolarizing;
    throw ConfigError("channel: unknown value '" + s + "'");
}

inline const char* to_string(ChannelKind c) {
    switch (c) {
        case ChannelKind::dephasing: return "dephasing";
        case ChannelKind::amplitude_damping: return "amplitude_damping";
        case ChannelKind::depolarizing: return "depolarizing";
    }
    return "?";
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::fig9;
    ChannelKind channel = ChannelKind::dephasing;
    std::vector<double> noise_grid;
    std::vector<double> epsilon_grid;
    int sample_count = 0;  // 0 = experiment default
    std::uint64_t seed = 12345;
    std::string output_path;  // files written as <output_path>.csv/.json

    // Experiment-specific knobs.
    std::vector<int> d_grid;          // fig9
    std::vector<int> M_grid;          // fig9
    int n_max = 4;                    // lemma1-check: largest slot count
    std::int64_t budget = 4096;       // dense-construction dimension cap
    std::int64_t iter_budget = 1 << 22;  // cap on O(M) closed-form loops
    int s_count = 13;                 // fig7: node positions
    double l_factor = 2.3;            // fig7: total span / bare threshold
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(key + ": not a number: '" + s + "'");
    }
}

inline std::int64_t parse_int(const std::string& key, const std::string& s) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError(key + ": not an integer: '" + s + "'");
    }
}

}  // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::split_list;
    if (key == "experiment") {
        cfg.experiment = parse_experiment(value);
    } else if (key == "channel") {
        cfg.channel = parse_channel(value);
    } else if (key == "noise_grid") {
        cfg.noise_grid.clear();
        for (const auto& s : split_list(value)) cfg.noise_grid.push_back(parse_double(key, s));
    } else if (key == "epsilon_grid") {
        cfg.epsilon_grid.clear();
        for (const auto& s : split_list(value)) cfg.epsilon_grid.push_back(parse_double(key, s));
    } else if (key == "sample_count") {
        cfg.sample_count = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "output_path") {
        cfg.output_path = value;
    } else if (key == "d_grid") {
        cfg.d_grid.clear();
        for (const auto& s : split_list(value)) cfg.d_grid.push_back(static_cast<int>(parse_int(key, s)));
    } else if (key == "M_grid") {
        cfg.M_grid.clear();
        for (const auto& s : split_list(value)) cfg.M_grid.push_back(static_cast<int>(parse_int(key, s)));
    } else if (key == "n_max") {
        cfg.n_max = static_cast<int>(parse_int(key, value));
    } else if (key == "budget") {
        cfg.budget = parse_int(key, value);
    } else if (key == "iter_budget") {
        cfg.iter_budget = parse_int(key, value);
    } else if (key == "s_count") {
        cfg.s_count = static_cast<int>(parse_int(key, value));
    } else if (key == "l_factor") {
        cfg.l_factor = parse_double(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

inline ExperimentConfig parse_config_text(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    bool saw_experiment = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        apply_config_entry(cfg, key, value);
        if (key == "experiment") saw_experiment = true;
    }
    if (!saw_experiment) throw ConfigError("experiment: missing (required key)");
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config_text(in);
}

// Fills per-experiment defaults and validates every grid value.
inline void finalize_config(ExperimentConfig& cfg) {
    using EK = ExperimentKind;
    switch (cfg.experiment) {
        case EK::fig3:
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.4};
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
            if (cfg.sample_count == 0) cfg.sample_count = 4;
            break;
        case EK::fig4:
            cfg.channel = ChannelKind::dephasing;
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.3, 0.4, 0.5, 0.6, 0.7};
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
            if (cfg.sample_count == 0) cfg.sample_count = 200;
            break;
        case EK::table3:
            if (cfg.noise_grid.empty())
                cfg.noise_grid = {cfg.channel == ChannelKind::amplitude_damping ? 0.65 : 0.4};
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
            if (cfg.sample_count == 0) cfg.sample_count = 200;
            break;
        case EK::fig6:
            cfg.channel = ChannelKind::dephasing;
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.75, 0.80};
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
            if (cfg.sample_count == 0) cfg.sample_count = 200;
            break;
        case EK::fig7:
            cfg.channel = ChannelKind::depolarizing;
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.01};
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.1};
            if (cfg.sample_count == 0) cfg.sample_count = 200;
            break;
        case EK::fig9:
            if (cfg.d_grid.empty()) cfg.d_grid = {2, 3, 4, 5, 6};
            if (cfg.M_grid.empty())
                for (int m = 2; m <= 1024; m *= 2) cfg.M_grid.push_back(m);
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.1};
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.0};
            break;
        case EK::lemma1_check:
            if (cfg.sample_count == 0) cfg.sample_count = 200;
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.1};
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.0};
            break;
        case EK::thm3_check:
            if (cfg.epsilon_grid.empty()) cfg.epsilon_grid = {0.19};
            if (cfg.noise_grid.empty()) cfg.noise_grid = {0.0};
            break;
    }
    if (cfg.output_path.empty()) cfg.output_path = std::string("out/") + to_string(cfg.experiment);

    if (cfg.noise_grid.empty()) throw ConfigError("noise_grid: must not be empty");
    if (cfg.epsilon_grid.empty()) throw ConfigError("epsilon_grid: must not be empty");
    for (double e : cfg.epsilon_grid)
        if (e <= 0.0 || e >= 1.0) throw ConfigError("epsilon_grid: values must lie in (0, 1)");
    for (double p : cfg.noise_grid) {
        if (cfg.channel == ChannelKind::depolarizing) {
            if (cfg.experiment == ExperimentKind::fig7 && p <= 0.0)
                throw ConfigError("noise_grid: depolarizing alpha must be positive");
            if (p < 0.0) throw ConfigError("noise_grid: depolarizing alpha must be nonnegative");
        } else if (p < 0.0 || p > 1.0) {
            throw ConfigError("noise_grid: values must lie in [0, 1] for this channel");
        }
    }
    if (cfg.sample_count < 0) throw ConfigError("sample_count: must be nonnegative");
    if (cfg.n_max < 1) throw ConfigError("n_max: must be at least 1");
    if (cfg.budget < 4) throw ConfigError("budget: too small");
    if (cfg.iter_budget < 1024) throw ConfigError("iter_budget: too small");
    if (cfg.s_count < 2) throw ConfigError("s_count: need at least two node positions");
    if (cfg.l_factor <= 0.0) throw ConfigError("l_factor: must be positive");
    for (int d : cfg.d_grid)
        if (d < 2) throw ConfigError("d_grid: dimensions must be at least 2");
    for (int m : cfg.M_grid)
        if (m < 2) throw ConfigError("M_grid: ranks must be at least 2");
}

}  // namespace catlab
