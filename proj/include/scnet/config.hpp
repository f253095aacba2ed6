// SPDX-License-Identifier: Apache-2.0
//
// scnet - complex-valued downlink CSI prediction for FDD massive MIMO
// Copyright (C) 2026 The scnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

// Run configuration: every tunable of the pipeline, loaded from an INI-style
// file of [section] headers and `key = value` lines. '#' and ';' start comments.
// Unknown sections or keys are errors. Defaults are the full-scale ("paper")
// settings; the "desk" preset shrinks the problem to laptop size.
//
// Precedence: preset < file < command-line overrides.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "scnet/channel_model.hpp"
#include "scnet/error.hpp"
#include "scnet/sweep.hpp"

namespace scnet {

struct RunConfig {
    // [run]
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    // [array]
    std::size_t antennas = 128;
    double spacing_m = 0.0; // 0: half wavelength at the uplink carrier
    // [channel]
    double uplink_freq_hz = 2.5e9;
    double freq_diff_mhz = 120.0;
    // [scenario]
    std::size_t paths = 200;
    double angular_spread_deg = 10.0;
    double mean_doa_min_deg = -60.0;
    double mean_doa_max_deg = 60.0;
    double max_delay_s = 1e-4;
    double rayleigh_scale = 0.0; // 0: E[alpha^2] = 1/P
    double distance_min_m = 10.0;
    double distance_max_m = 500.0;
    // [estimation]
    double snr_db = 25.0;
    bool perfect = false;
    bool label_noise = false;
    // [dataset]
    std::size_t samples = 102'400;
    double train_fraction = 0.9;
    // [network]
    std::vector<std::size_t> hidden{128, 64, 128};
    // [training]
    std::size_t batch_size = 128;
    std::size_t epochs = 400;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool shuffle = true;
    // [sweep]
    ModelSelector models = ModelSelector::both;
    std::size_t seeds = 3;
    std::vector<double> angular_spread_grid_deg{5, 10, 15, 20, 25};
    std::vector<double> freq_diff_grid_mhz{10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120};
    std::vector<double> path_count_grid{50, 100, 150, 200, 250, 300};

    static RunConfig paper() { return {}; }

    static RunConfig desk() {
        RunConfig c;
        c.antennas = 32;
        c.paths = 50;
        c.samples = 9'216; // 8,192 train + 1,024 test
        c.train_fraction = 8.0 / 9.0;
        c.epochs = 200;
        c.path_count_grid = {25, 50, 100};
        return c;
    }

    static RunConfig preset(std::string_view name) {
        if (name == "paper") return paper();
        if (name == "desk") return desk();
        throw ConfigError(0, "unknown preset '" + std::string(name) + "' (expected paper or desk)");
    }

    double antenna_spacing() const { return spacing_m > 0.0 ? spacing_m : kSpeedOfLight / (2.0 * uplink_freq_hz); }
    double downlink_freq_hz() const { return uplink_freq_hz + freq_diff_mhz * 1e6; }
};

namespace config_detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct ValueError {
    std::string message;
};

inline double parse_double(std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ValueError{"expected a number, got '" + std::string(v) + "'"};
    return out;
}

inline std::uint64_t parse_u64(std::string_view v) {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
        throw ValueError{"expected a nonnegative integer, got '" + std::string(v) + "'"};
    return out;
}

inline std::size_t parse_count(std::string_view v, std::size_t min = 1) {
    const auto n = parse_u64(v);
    if (n < min) throw ValueError{"must be at least " + std::to_string(min)};
    return static_cast<std::size_t>(n);
}

inline bool parse_bool(std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValueError{"expected true or false, got '" + std::string(v) + "'"};
}

template <class T, class Parse>
std::vector<T> parse_list(std::string_view v, Parse parse) {
    std::vector<T> out;
    v = trim(v);
    if (v.empty()) throw ValueError{"expected a comma-separated list"};
    while (true) {
        const auto comma = v.find(',');
        out.push_back(parse(v.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

inline double positive(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ValueError{"must be positive"};
    return x;
}

inline double nonnegative(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ValueError{"must be nonnegative"};
    return x;
}

inline double finite(double x) {
    if (!std::isfinite(x)) throw ValueError{"must be finite"};
    return x;
}

inline double unit_open(double x) {
    if (!(x >= 0.0 && x < 1.0)) throw ValueError{"must lie in [0, 1)"};
    return x;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
    return out.str();
}

inline std::string num(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

struct Key {
    std::string_view section;
    std::string_view name;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

inline const std::vector<Key>& keys() {
    using C = RunConfig;
    using V = std::string_view;
    static const std::vector<Key> table = {
        {"run", "seed", [](C& c, V v) { c.seed = parse_u64(v); }, [](const C& c) { return std::to_string(c.seed); }},
        {"run", "workers", [](C& c, V v) { c.workers = parse_count(v); },
         [](const C& c) { return std::to_string(c.workers); }},
        {"array", "antennas", [](C& c, V v) { c.antennas = parse_count(v); },
         [](const C& c) { return std::to_string(c.antennas); }},
        {"array", "spacing_m", [](C& c, V v) { c.spacing_m = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.spacing_m); }},
        {"channel", "uplink_freq_hz", [](C& c, V v) { c.uplink_freq_hz = positive(parse_double(v)); },
         [](const C& c) { return num(c.uplink_freq_hz); }},
        {"channel", "freq_diff_mhz", [](C& c, V v) { c.freq_diff_mhz = finite(parse_double(v)); },
         [](const C& c) { return num(c.freq_diff_mhz); }},
        {"scenario", "paths", [](C& c, V v) { c.paths = parse_count(v); },
         [](const C& c) { return std::to_string(c.paths); }},
        {"scenario", "angular_spread_deg", [](C& c, V v) { c.angular_spread_deg = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.angular_spread_deg); }},
        {"scenario", "mean_doa_min_deg", [](C& c, V v) { c.mean_doa_min_deg = finite(parse_double(v)); },
         [](const C& c) { return num(c.mean_doa_min_deg); }},
        {"scenario", "mean_doa_max_deg", [](C& c, V v) { c.mean_doa_max_deg = finite(parse_double(v)); },
         [](const C& c) { return num(c.mean_doa_max_deg); }},
        {"scenario", "max_delay_s", [](C& c, V v) { c.max_delay_s = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.max_delay_s); }},
        {"scenario", "rayleigh_scale", [](C& c, V v) { c.rayleigh_scale = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.rayleigh_scale); }},
        {"scenario", "distance_min_m", [](C& c, V v) { c.distance_min_m = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.distance_min_m); }},
        {"scenario", "distance_max_m", [](C& c, V v) { c.distance_max_m = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.distance_max_m); }},
        {"estimation", "snr_db",
         [](C& c, V v) {
             const double x = parse_double(v);
             if (std::isnan(x)) throw ValueError{"must be a number"};
             c.snr_db = x;
         },
         [](const C& c) { return num(c.snr_db); }},
        {"estimation", "perfect", [](C& c, V v) { c.perfect = parse_bool(v); },
         [](const C& c) { return std::string(c.perfect ? "true" : "false"); }},
        {"estimation", "label_noise", [](C& c, V v) { c.label_noise = parse_bool(v); },
         [](const C& c) { return std::string(c.label_noise ? "true" : "false"); }},
        {"dataset", "samples", [](C& c, V v) { c.samples = parse_count(v, 2); },
         [](const C& c) { return std::to_string(c.samples); }},
        {"dataset", "train_fraction",
         [](C& c, V v) {
             const double x = parse_double(v);
             if (!(x > 0.0 && x < 1.0)) throw ValueError{"must lie strictly between 0 and 1"};
             c.train_fraction = x;
         },
         [](const C& c) { return num(c.train_fraction); }},
        {"network", "hidden",
         [](C& c, V v) { c.hidden = parse_list<std::size_t>(v, [](V s) { return parse_count(s); }); },
         [](const C& c) { return join(c.hidden); }},
        {"training", "batch_size", [](C& c, V v) { c.batch_size = parse_count(v); },
         [](const C& c) { return std::to_string(c.batch_size); }},
        {"training", "epochs", [](C& c, V v) { c.epochs = parse_count(v); },
         [](const C& c) { return std::to_string(c.epochs); }},
        {"training", "learning_rate", [](C& c, V v) { c.learning_rate = nonnegative(parse_double(v)); },
         [](const C& c) { return num(c.learning_rate); }},
        {"training", "beta1", [](C& c, V v) { c.beta1 = unit_open(parse_double(v)); },
         [](const C& c) { return num(c.beta1); }},
        {"training", "beta2", [](C& c, V v) { c.beta2 = unit_open(parse_double(v)); },
         [](const C& c) { return num(c.beta2); }},
        {"training", "epsilon", [](C& c, V v) { c.epsilon = positive(parse_double(v)); },
         [](const C& c) { return num(c.epsilon); }},
        {"training", "shuffle", [](C& c, V v) { c.shuffle = parse_bool(v); },
         [](const C& c) { return std::string(c.shuffle ? "true" : "false"); }},
        {"sweep", "models",
         [](C& c, V v) {
             v = trim(v);
             if (v == "scnet")
                 c.models = ModelSelector::scnet;
             else if (v == "fnn")
                 c.models = ModelSelector::fnn;
             else if (v == "both")
                 c.models = ModelSelector::both;
             else
                 throw ValueError{"expected scnet, fnn or both"};
         },
         [](const C& c) { return std::string(to_string(c.models)); }},
        {"sweep", "seeds", [](C& c, V v) { c.seeds = parse_count(v); },
         [](const C& c) { return std::to_string(c.seeds); }},
        {"sweep", "angular_spread_grid_deg",
         [](C& c, V v) {
             c.angular_spread_grid_deg = parse_list<double>(v, [](V s) { return nonnegative(parse_double(s)); });
         },
         [](const C& c) { return join(c.angular_spread_grid_deg); }},
        {"sweep", "freq_diff_grid_mhz",
         [](C& c, V v) { c.freq_diff_grid_mhz = parse_list<double>(v, [](V s) { return finite(parse_double(s)); }); },
         [](const C& c) { return join(c.freq_diff_grid_mhz); }},
        {"sweep", "path_count_grid",
         [](C& c, V v) {
             c.path_count_grid = parse_list<double>(v, [](V s) { return static_cast<double>(parse_count(s)); });
         },
         [](const C& c) { return join(c.path_count_grid); }},
    };
    return table;
}

inline const Key* find_key(std::string_view section, std::string_view name) {
    for (const auto& k : keys())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

inline bool known_section(std::string_view section) {
    return std::any_of(keys().begin(), keys().end(), [&](const Key& k) { return k.section == section; });
}

} // namespace config_detail

/// Sets `section.key` from its textual value; `line` is used in error messages.
inline void set_config_value(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value,
                             int line = 0) {
    const auto* k = config_detail::find_key(section, key);
    if (!k) {
        if (!config_detail::known_section(section))
            throw ConfigError(line, "unknown section [" + std::string(section) + "]");
        throw ConfigError(line, "unknown key '" + std::string(key) + "' in section [" + std::string(section) + "]");
    }
    try {
        k->set(cfg, value);
    } catch (const config_detail::ValueError& e) {
        throw ConfigError(line, std::string(section) + "." + std::string(key) + ": " + e.message);
    }
}

/// Applies a `section.key=value` override.
inline void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw ConfigError(0, "override '" + std::string(assignment) + "' is not of the form section.key=value");
    set_config_value(cfg, config_detail::trim(assignment.substr(0, dot)),
                     config_detail::trim(assignment.substr(dot + 1, eq - dot - 1)), assignment.substr(eq + 1));
}

/// Cross-field checks that no single key can enforce.
inline void validate(const RunConfig& cfg) {
    if (cfg.mean_doa_min_deg > cfg.mean_doa_max_deg)
        throw ConfigError(0, "scenario.mean_doa_min_deg exceeds scenario.mean_doa_max_deg");
    if (cfg.distance_min_m > cfg.distance_max_m)
        throw ConfigError(0, "scenario.distance_min_m exceeds scenario.distance_max_m");
    if (!(cfg.downlink_freq_hz() > 0.0)) throw ConfigError(0, "downlink frequency must be positive");
    if (cfg.hidden.empty()) throw ConfigError(0, "network.hidden must list at least one layer");
    const auto n_train = std::llround(static_cast<double>(cfg.samples) * cfg.train_fraction);
    if (n_train <= 0 || static_cast<std::size_t>(n_train) >= cfg.samples)
        throw ConfigError(0, "dataset.samples and dataset.train_fraction leave one side of the split empty");
}

/// Parses config text on top of `cfg`.
inline void parse_config(RunConfig& cfg, std::istream& in) {
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        if (const auto c = text.find_first_of("#;"); c != std::string_view::npos) text = text.substr(0, c);
        text = config_detail::trim(text);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ConfigError(line, "malformed section header");
            section = std::string(config_detail::trim(text.substr(1, text.size() - 2)));
            if (!config_detail::known_section(section)) throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
        if (section.empty()) throw ConfigError(line, "key outside of any [section]");
        const auto key = config_detail::trim(text.substr(0, eq));
        const auto value = config_detail::trim(text.substr(eq + 1));
        if (value.empty()) throw ConfigError(line, "key '" + std::string(key) + "' has no value");
        set_config_value(cfg, section, key, value, line);
    }
    validate(cfg);
}

inline RunConfig parse_config_string(const std::string& text, RunConfig base = {}) {
    std::istringstream in(text);
    parse_config(base, in);
    return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    parse_config(base, in);
    return base;
}

/// Full config text; parse_config of the output reproduces `cfg`.
inline std::string to_config_text(const RunConfig& cfg) {
    std::ostringstream out;
    std::string_view section;
    for (const auto& k : config_detail::keys()) {
        if (k.section != section) {
            if (!section.empty()) out << '\n';
            section = k.section;
            out << '[' << section << "]\n";
        }
        out << k.name << " = " << k.get(cfg) << '\n';
    }
    return out.str();
}

inline GenerationParams generation_params(const RunConfig& cfg) {
    GenerationParams g;
    g.array = {cfg.antennas, cfg.antenna_spacing()};
    g.scenario.paths = cfg.paths;
    g.scenario.angular_spread = deg_to_rad(cfg.angular_spread_deg);
    g.scenario.mean_doa_min = deg_to_rad(cfg.mean_doa_min_deg);
    g.scenario.mean_doa_max = deg_to_rad(cfg.mean_doa_max_deg);
    g.scenario.max_delay = cfg.max_delay_s;
    g.scenario.rayleigh_scale = cfg.rayleigh_scale;
    g.scenario.distance_min = cfg.distance_min_m;
    g.scenario.distance_max = cfg.distance_max_m;
    g.uplink_frequency = cfg.uplink_freq_hz;
    g.downlink_frequency = cfg.downlink_freq_hz();
    g.snr_db = cfg.snr_db;
    g.perfect_estimation = cfg.perfect;
    g.label_noise = cfg.label_noise;
    g.workers = cfg.workers;
    return g;
}

inline TrainConfig train_config(const RunConfig& cfg) {
    TrainConfig t;
    t.batch_size = cfg.batch_size;
    t.epochs = cfg.epochs;
    t.adam = {cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon};
    t.seed = derive_seed(cfg.seed, "train");
    t.shuffle = cfg.shuffle;
    return t;
}

inline ExperimentParams experiment_params(const RunConfig& cfg) {
    ExperimentParams p;
    p.generation = generation_params(cfg);
    p.samples = cfg.samples;
    p.train_fraction = cfg.train_fraction;
    p.hidden = cfg.hidden;
    p.train = train_config(cfg);
    return p;
}

inline SweepSpec sweep_spec(const RunConfig& cfg, ControlVariable control) {
    SweepSpec s;
    s.control = control;
    switch (control) {
    case ControlVariable::angular_spread: s.grid = cfg.angular_spread_grid_deg; break;
    case ControlVariable::freq_diff: s.grid = cfg.freq_diff_grid_mhz; break;
    case ControlVariable::path_count: s.grid = cfg.path_count_grid; break;
    }
    s.fixed = experiment_params(cfg);
    s.seeds = cfg.seeds;
    s.models = cfg.models;
    s.master_seed = cfg.seed;
    s.workers = cfg.workers;
    return s;
}

} // namespace scnet
