#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "multinet/dynamics.hpp"
#include "multinet/shock.hpp"

namespace multinet {

struct ConfigError : std::runtime_error {
    ConfigError(int line, const std::string& message)
        : std::runtime_error("config line " + std::to_string(line) + ": " + message),
          line(line) {}
    int line;
};

/// Sweep grid: every cell (n, nu, d, e) runs every requested condition.
struct SweepSpec {
    std::vector<double> d_values{0.0, 0.4, 0.8, 1.2, 1.6, 2.0};
    std::vector<double> e_values{0.0, 0.4, 0.8, 1.2, 1.6, 2.0};
    std::vector<int> n_values;        // empty: use the single-run n
    std::vector<double> nu_values;    // empty: use the single-run nu
    std::vector<ShockCondition> conditions{ShockCondition::LL, ShockCondition::HH,
                                           ShockCondition::LH, ShockCondition::HL};
    int replicates = 100;
    bool paired_seeds = true;  // same phase-1 seed stream across conditions
};

/// Everything a run needs, parsed from flat key=value text.
struct Settings {
    SimConfig sim;
    IncentiveParams incentives;  // c filled in per condition by the shock lab
    ShockSpec shock;
    SweepSpec sweep;

    void validate() const {
        sim.validate();
        shock.validate();
        incentives.validate(sim.mode);
        if (sweep.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

inline double parse_real(const std::string& v) {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not a number: " + v);
    return x;
}

inline long long parse_int(const std::string& v) {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not an integer: " + v);
    return x;
}

}  // namespace detail

/// Parses flat "key=value" configuration text. '#' starts a comment; several
/// pairs may share a line. Unknown keys, malformed lines and out-of-range
/// values raise ConfigError with the offending line number.
inline Settings parse_config(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError(lineno, "expected key=value, got '" + token + "'");
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            try {
                if (key == "n") s.sim.n = static_cast<int>(detail::parse_int(value));
                else if (key == "p") s.sim.p = static_cast<int>(detail::parse_int(value));
                else if (key == "nu") s.sim.nu = detail::parse_real(value);
                else if (key == "quiet_rounds")
                    s.sim.quiet_rounds = static_cast<int>(detail::parse_int(value));
                else if (key == "max_rounds")
                    s.sim.max_rounds = static_cast<int>(detail::parse_int(value));
                else if (key == "seed")
                    s.sim.seed = static_cast<std::uint64_t>(detail::parse_int(value));
                else if (key == "mode") {
                    if (value == "single") s.sim.mode = NetworkMode::single_layer;
                    else if (value == "multiplex") s.sim.mode = NetworkMode::multiplex;
                    else throw std::invalid_argument("mode must be single or multiplex");
                } else if (key == "b") s.incentives.b = detail::parse_real(value);
                else if (key == "c_low") s.shock.c_low = detail::parse_real(value);
                else if (key == "c_high") s.shock.c_high = detail::parse_real(value);
                else if (key == "d") s.incentives.d = detail::parse_real(value);
                else if (key == "e") s.incentives.e = detail::parse_real(value);
                else if (key == "condition")
                    s.shock.condition = shock_condition_from_string(value);
                else if (key == "shocked_layers") {
                    if (value == "both") s.shock.shocked_layers = ShockedLayers::both;
                    else if (value == "layer1")
                        s.shock.shocked_layers = ShockedLayers::layer1_only;
                    else throw std::invalid_argument("shocked_layers must be both or layer1");
                } else if (key == "replicates")
                    s.sweep.replicates = static_cast<int>(detail::parse_int(value));
                else if (key == "paired_seeds") {
                    if (value == "true") s.sweep.paired_seeds = true;
                    else if (value == "false") s.sweep.paired_seeds = false;
                    else throw std::invalid_argument("paired_seeds must be true or false");
                } else if (key == "d_grid" || key == "e_grid" || key == "nu_grid") {
                    std::vector<double> vals;
                    for (const auto& item : detail::split(value, ','))
                        vals.push_back(detail::parse_real(item));
                    if (vals.empty()) throw std::invalid_argument("empty grid");
                    if (key == "d_grid") s.sweep.d_values = vals;
                    else if (key == "e_grid") s.sweep.e_values = vals;
                    else s.sweep.nu_values = vals;
                } else if (key == "n_grid") {
                    std::vector<int> vals;
                    for (const auto& item : detail::split(value, ','))
                        vals.push_back(static_cast<int>(detail::parse_int(item)));
                    if (vals.empty()) throw std::invalid_argument("empty grid");
                    s.sweep.n_values = vals;
                } else if (key == "conditions") {
                    std::vector<ShockCondition> conds;
                    for (const auto& item : detail::split(value, ','))
                        conds.push_back(shock_condition_from_string(item));
                    if (conds.empty()) throw std::invalid_argument("empty condition list");
                    s.sweep.conditions = conds;
                } else {
                    throw std::invalid_argument("unknown key '" + key + "'");
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& ex) {
                throw ConfigError(lineno, ex.what());
            }
        }
    }
    try {
        s.validate();
    } catch (const std::exception& ex) {
        throw ConfigError(lineno, ex.what());
    }
    return s;
}

}  // namespace multinet
