// SPDX-License-Identifier: Apache-2.0
//
// lvs-sim  Location verification simulator for Rician fading channels
// Copyright (C) 2026 The lvs-sim authors
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

#include "lvs/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lvs {

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo])))
        ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1])))
        --hi;
    return s.substr(lo, hi - lo);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::set<std::string> kKnownSections = {"bs", "legit", "mal", "scenario",
                                              "track", "experiment", "grid"};

double parse_double_or_throw(const ConfigEntry& e, const std::string& name) {
    const std::string v = trim(e.value);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigError("key '" + name + "' expects a number, got '" + e.value + "'", e.line,
                          e.column);
    return x;
}

long long parse_int_or_throw(const ConfigEntry& e, const std::string& name) {
    const std::string v = trim(e.value);
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError("key '" + name + "' expects an integer, got '" + e.value + "'", e.line,
                          e.column);
    return x;
}

bool parse_bool_or_throw(const ConfigEntry& e, const std::string& name) {
    const std::string v = lower(trim(e.value));
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    throw ConfigError("key '" + name + "' expects a boolean, got '" + e.value + "'", e.line,
                      e.column);
}

std::vector<double> parse_list_or_throw(const ConfigEntry& e, const std::string& name) {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string v = trim(item);
        if (v.empty())
            throw ConfigError("key '" + name + "' has an empty list item", e.line, e.column);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || !std::isfinite(x))
            throw ConfigError("key '" + name + "' has a non-numeric list item '" + v + "'",
                              e.line, e.column);
        out.push_back(x);
    }
    if (out.empty())
        throw ConfigError("key '" + name + "' expects a comma-separated list", e.line, e.column);
    return out;
}

// Tracks which entries the semantic pass has consumed so leftovers can be
// reported as unknown keys.
class Cursor {
public:
    explicit Cursor(const ConfigStore& store) : store_(store) {}

    const ConfigEntry* take(const std::string& section, const std::string& key) {
        const ConfigEntry* e = store_.find(section, key);
        if (e)
            consumed_.insert(section + "." + key);
        return e;
    }

    double number(const std::string& sec, const std::string& key, double fallback) {
        const ConfigEntry* e = take(sec, key);
        return e ? parse_double_or_throw(*e, sec + "." + key) : fallback;
    }

    double required_number(const std::string& sec, const std::string& key) {
        const ConfigEntry* e = take(sec, key);
        if (!e)
            throw ConfigError("missing required key '" + sec + "." + key + "'");
        return parse_double_or_throw(*e, sec + "." + key);
    }

    long long integer(const std::string& sec, const std::string& key, long long fallback) {
        const ConfigEntry* e = take(sec, key);
        return e ? parse_int_or_throw(*e, sec + "." + key) : fallback;
    }

    long long required_integer(const std::string& sec, const std::string& key) {
        const ConfigEntry* e = take(sec, key);
        if (!e)
            throw ConfigError("missing required key '" + sec + "." + key + "'");
        return parse_int_or_throw(*e, sec + "." + key);
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        const ConfigEntry* e = take(sec, key);
        return e ? parse_bool_or_throw(*e, sec + "." + key) : fallback;
    }

    std::string word(const std::string& sec, const std::string& key,
                     const std::string& fallback) {
        const ConfigEntry* e = take(sec, key);
        return e ? lower(trim(e->value)) : fallback;
    }

    std::vector<double> list(const std::string& sec, const std::string& key,
                             std::vector<double> fallback) {
        const ConfigEntry* e = take(sec, key);
        return e ? parse_list_or_throw(*e, sec + "." + key) : std::move(fallback);
    }

    // A value given either on a linear scale (`key`) or in decibels
    // (`key_db`); giving both is an error.
    std::optional<double> linear_or_db(const std::string& sec, const std::string& key) {
        const ConfigEntry* lin = take(sec, key);
        const ConfigEntry* db = take(sec, key + "_db");
        if (lin && db)
            throw ConfigError("give either '" + sec + "." + key + "' or '" + sec + "." + key +
                                  "_db', not both",
                              db->line, db->column);
        if (lin)
            return parse_double_or_throw(*lin, sec + "." + key);
        if (db)
            return db_to_linear(parse_double_or_throw(*db, sec + "." + key + "_db"));
        return std::nullopt;
    }

    double required_linear_or_db(const std::string& sec, const std::string& key) {
        const auto v = linear_or_db(sec, key);
        if (!v)
            throw ConfigError("missing required key '" + sec + "." + key + "' (or '" + sec + "." +
                              key + "_db')");
        return *v;
    }

    void finish() const {
        for (const auto& [section, entries] : store_.sections()) {
            if (!kKnownSections.count(section)) {
                const auto& first = entries.begin()->second;
                throw ConfigError("unknown section '" + section + "'", first.line, first.column);
            }
            for (const auto& [key, entry] : entries)
                if (!consumed_.count(section + "." + key))
                    throw ConfigError("unknown key '" + section + "." + key + "'", entry.line,
                                      entry.column);
        }
    }

private:
    const ConfigStore& store_;
    std::set<std::string> consumed_;
};

ArrayKind parse_kind(const std::string& word, const std::string& name) {
    if (word == "ula")
        return ArrayKind::ula;
    if (word == "uca")
        return ArrayKind::uca;
    throw ConfigError("key '" + name + "' expects 'ula' or 'uca', got '" + word + "'");
}

ArrayGeometry build_array(ArrayKind kind, int n, double size_wavelengths, double carrier_hz,
                          double light_speed) {
    const double wavelength = light_speed / carrier_hz;
    if (kind == ArrayKind::uca)
        return ArrayGeometry::uca(n, size_wavelengths * wavelength, carrier_hz, light_speed);
    return ArrayGeometry::ula(n, size_wavelengths * wavelength, carrier_hz, light_speed);
}

// Parse "lo:hi" pairs (units of pi) into closed angle intervals, splitting
// ranges that wrap past the half-turn.
std::vector<AngleInterval> parse_forbidden(const ConfigEntry& e) {
    std::vector<AngleInterval> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string token = trim(item);
        if (token.empty())
            throw ConfigError("'scenario.forbidden' has an empty range", e.line, e.column);
        const std::size_t colon = token.find(':');
        if (colon == std::string::npos)
            throw ConfigError("'scenario.forbidden' ranges use 'lo:hi' in units of pi", e.line,
                              e.column);
        char* end = nullptr;
        const std::string lo_s = trim(token.substr(0, colon));
        const std::string hi_s = trim(token.substr(colon + 1));
        const double lo_raw = std::strtod(lo_s.c_str(), &end);
        if (lo_s.empty() || end != lo_s.c_str() + lo_s.size())
            throw ConfigError("'scenario.forbidden' has a non-numeric bound '" + lo_s + "'",
                              e.line, e.column);
        const double hi_raw = std::strtod(hi_s.c_str(), &end);
        if (hi_s.empty() || end != hi_s.c_str() + hi_s.size())
            throw ConfigError("'scenario.forbidden' has a non-numeric bound '" + hi_s + "'",
                              e.line, e.column);
        const double lo = normalize_angle(lo_raw * kPi);
        const double hi = normalize_angle(hi_raw * kPi);
        if (lo <= hi) {
            out.push_back(AngleInterval{lo, hi});
        } else {
            // Wraps past the half-turn: split at the branch cut.
            out.push_back(AngleInterval{lo, kPi});
            out.push_back(AngleInterval{-kPi, hi});
        }
    }
    return out;
}

} // namespace

// ---------- ConfigStore ----------

void ConfigStore::set(const std::string& section, const std::string& key,
                      const std::string& value, int line, int column) {
    sections_[section][key] = ConfigEntry{value, line, column};
}

const ConfigEntry* ConfigStore::find(const std::string& section, const std::string& key) const {
    const auto sec = sections_.find(section);
    if (sec == sections_.end())
        return nullptr;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
}

void ConfigStore::override_value(const std::string& key, const std::string& value) {
    const std::size_t dot = key.find('.');
    if (dot != std::string::npos) {
        const std::string section = key.substr(0, dot);
        const std::string bare = key.substr(dot + 1);
        if (section.empty() || bare.empty())
            throw ConfigError("override key '" + key + "' is malformed");
        if (!kKnownSections.count(section))
            throw ConfigError("override names unknown section '" + section + "'");
        set(section, bare, value);
        return;
    }
    // Bare key: must resolve uniquely across sections that already hold it.
    std::vector<std::string> hits;
    for (const auto& [section, entries] : sections_)
        if (entries.count(key))
            hits.push_back(section);
    if (hits.empty())
        throw ConfigError("override key '" + key +
                          "' not present in the config; qualify it as 'section." + key + "'");
    if (hits.size() > 1)
        throw ConfigError("override key '" + key + "' is ambiguous; qualify it as 'section." +
                          key + "'");
    set(hits.front(), key, value);
}

// ---------- parsing ----------

ConfigStore parse_ini(const std::string& text) {
    ConfigStore store;
    std::string current_section;
    int line_no = 0;
    std::stringstream ss(text);
    std::string raw;
    while (std::getline(ss, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        // Strip comments.
        const std::size_t comment = raw.find_first_of("#;");
        std::string body = comment == std::string::npos ? raw : raw.substr(0, comment);
        const std::string stripped = trim(body);
        if (stripped.empty())
            continue;
        const int col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError("unterminated section header", line_no, col);
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name.empty())
                throw ConfigError("empty section name", line_no, col);
            current_section = lower(name);
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no, col);
        const std::string key = lower(trim(body.substr(0, eq)));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key", line_no, col);
        if (current_section.empty())
            throw ConfigError("key '" + key + "' appears before any [section]", line_no, col);
        if (store.find(current_section, key))
            throw ConfigError("duplicate key '" + current_section + "." + key + "'", line_no,
                              col);
        store.set(current_section, key, value, line_no, col);
    }
    return store;
}

// ---------- semantics ----------

ParsedConfig interpret(const ConfigStore& store) {
    Cursor cur(store);
    ParsedConfig cfg;

    // Shared physical constants.
    const double light_speed = cur.number("scenario", "light_speed", kDefaultLightSpeed);
    const double carrier_hz = cur.number("bs", "carrier_hz", 5.9e9);
    if (!(light_speed > 0.0))
        throw ConfigError("'scenario.light_speed' must be positive");
    if (!(carrier_hz > 0.0))
        throw ConfigError("'bs.carrier_hz' must be positive");

    // Receiver array.
    const int bs_n = static_cast<int>(cur.required_integer("bs", "n"));
    const double bs_spacing = cur.number("bs", "spacing_wavelengths", 0.5);
    cfg.scn.bs = build_array(ArrayKind::ula, bs_n, bs_spacing, carrier_hz, light_speed);

    // Legitimate transmitter.
    const int legit_n = static_cast<int>(cur.required_integer("legit", "n"));
    const ArrayKind legit_kind = parse_kind(cur.word("legit", "kind", "ula"), "legit.kind");
    const double legit_spacing = cur.number("legit", "spacing_wavelengths", 0.5);
    cfg.scn.veh_legit = build_array(legit_kind, legit_n, legit_spacing, carrier_hz, light_speed);
    cfg.scn.psi_legit = cur.number("legit", "psi_pi", 0.5) * kPi;

    cfg.scn.legit_chan.pure_los = cur.boolean("legit", "pure_los", false);
    const auto k0 = cur.linear_or_db("legit", "k");
    if (!k0 && !cfg.scn.legit_chan.pure_los)
        throw ConfigError("missing required key 'legit.k' (or 'legit.k_db')");
    cfg.scn.legit_chan.k_factor = k0.value_or(1.0);
    cfg.scn.legit_chan.noise_var = cur.required_linear_or_db("legit", "noise");
    cfg.scn.legit_chan.path.exponent = cur.number("legit", "path_exponent", 2.0);
    cfg.scn.legit_chan.path.ref_distance = cur.number("legit", "ref_distance_m", 1.0);
    cfg.scn.legit_chan.path.carrier_hz = carrier_hz;
    cfg.scn.legit_chan.path.light_speed = light_speed;

    // Attacker transmitter.
    const int mal_n = static_cast<int>(cur.integer("mal", "n", 0));
    const ArrayKind mal_kind = parse_kind(cur.word("mal", "kind", "ula"), "mal.kind");
    const double mal_spacing = cur.number("mal", "spacing_wavelengths", 0.5);
    cfg.scn.psi_mal = cur.number("mal", "psi_pi", 0.5) * kPi;
    cfg.scn.mal_chan.k_factor = cur.required_linear_or_db("mal", "k");
    cfg.scn.mal_chan.noise_var = cur.required_linear_or_db("mal", "noise");
    cfg.scn.mal_chan.pure_los = false;
    cfg.scn.mal_chan.path.exponent =
        cur.number("mal", "path_exponent", cfg.scn.legit_chan.path.exponent);
    cfg.scn.mal_chan.path.ref_distance =
        cur.number("mal", "ref_distance_m", cfg.scn.legit_chan.path.ref_distance);
    cfg.scn.mal_chan.path.carrier_hz = carrier_hz;
    cfg.scn.mal_chan.path.light_speed = light_speed;

    // Claimed location and detector-side settings.
    const double claimed_d = cur.required_number("scenario", "claimed_d_m");
    const double claimed_theta = cur.required_number("scenario", "claimed_theta_pi") * kPi;
    if (!(claimed_d > 0.0))
        throw ConfigError("'scenario.claimed_d_m' must be positive");
    cfg.scn.claimed = make_polar(claimed_d, claimed_theta);
    cfg.scn.r_l = cur.number("scenario", "r_l_m", 1.0);
    if (cfg.scn.r_l < 0.0)
        throw ConfigError("'scenario.r_l_m' must be non-negative");
    const double prior = cur.number("scenario", "prior_legit", 0.5);
    if (!(prior > 0.0) || !(prior < 1.0))
        throw ConfigError("'scenario.prior_legit' must lie strictly between 0 and 1");
    if (const ConfigEntry* e = cur.take("scenario", "forbidden"))
        cfg.scn.forbidden_angles = parse_forbidden(*e);
    if (const ConfigEntry* theta1 = cur.take("scenario", "theta1_pi")) {
        cfg.theta1 = parse_double_or_throw(*theta1, "scenario.theta1_pi") * kPi;
        cfg.theta1_auto = false;
    }

    // Transmit power: direct, or via the received power at the claim.
    const auto power = cur.linear_or_db("legit", "power");
    const auto received = cur.linear_or_db("legit", "received_power");
    if (power && received)
        throw ConfigError("give either 'legit.power' or 'legit.received_power', not both");
    if (!power && !received)
        throw ConfigError(
            "missing required key 'legit.power' or 'legit.received_power' (or their _db forms)");
    if (power) {
        if (!(*power > 0.0))
            throw ConfigError("'legit.power' must be positive");
        cfg.scn.legit_chan.tx_power = *power;
    } else {
        if (!(*received > 0.0))
            throw ConfigError("'legit.received_power' must be positive");
        set_received_power(cfg.scn, *received);
    }
    cfg.scn.mal_chan.tx_power = 1.0; // synthesized per attack

    // Tracking geometry.
    const auto speed_kmh = cur.take("track", "speed_kmh");
    const auto speed_mps = cur.take("track", "speed_mps");
    if (speed_kmh && speed_mps)
        throw ConfigError("give either 'track.speed_kmh' or 'track.speed_mps', not both");
    if (speed_kmh)
        cfg.track.speed_mps = parse_double_or_throw(*speed_kmh, "track.speed_kmh") / 3.6;
    else if (speed_mps)
        cfg.track.speed_mps = parse_double_or_throw(*speed_mps, "track.speed_mps");
    cfg.track.dt = cur.number("track", "dt_s", 0.1);
    cfg.track.t_count = static_cast<int>(cur.integer("track", "t_count", 10));
    cfg.track.r_u = cur.number("track", "r_u_m", 3.0);
    const std::string mode = cur.word("track", "mode", "on-road");
    if (mode == "on-road")
        cfg.track.mode = AttackMode::on_road;
    else if (mode == "free")
        cfg.track.mode = AttackMode::free_roam;
    else
        throw ConfigError("'track.mode' expects 'on-road' or 'free', got '" + mode + "'");
    const std::string road = cur.word("track", "road", "radial");
    if (road == "radial") {
        cfg.track.radial_road = true;
    } else if (road == "line") {
        cfg.track.radial_road = false;
    } else {
        throw ConfigError("'track.road' expects 'radial' or 'line', got '" + road + "'");
    }
    if (const ConfigEntry* bearing = cur.take("track", "bearing_pi")) {
        cfg.track.bearing = parse_double_or_throw(*bearing, "track.bearing_pi") * kPi;
        cfg.track.bearing_auto = false;
    } else {
        cfg.track.bearing = normalize_angle(claimed_theta + kPi);
        cfg.track.bearing_auto = true;
    }

    // Experiment harness.
    const long long trials = cur.integer("experiment", "trials", 100000);
    if (trials < 0)
        throw ConfigError("'experiment.trials' must be non-negative");
    cfg.exp.trials = static_cast<std::uint64_t>(trials);
    const long long seed = cur.integer("experiment", "seed", 1);
    cfg.exp.seed = static_cast<std::uint64_t>(seed);
    cfg.exp.jitter_std = cur.number("experiment", "jitter_std_m", 0.0);
    if (cfg.exp.jitter_std < 0.0)
        throw ConfigError("'experiment.jitter_std_m' must be non-negative");
    if (const ConfigEntry* lambda = cur.take("experiment", "lambda")) {
        cfg.exp.lambda = parse_double_or_throw(*lambda, "experiment.lambda");
        if (!(cfg.exp.lambda > 0.0))
            throw ConfigError("'experiment.lambda' must be positive", lambda->line,
                              lambda->column);
        cfg.exp.lambda_auto = false;
    }
    cfg.exp.log_lambda_min = cur.number("experiment", "log_lambda_min", -6.0);
    cfg.exp.log_lambda_max = cur.number("experiment", "log_lambda_max", 6.0);
    if (cfg.exp.log_lambda_max < cfg.exp.log_lambda_min)
        throw ConfigError("'experiment.log_lambda_max' must not be below log_lambda_min");
    cfg.exp.lambda_points = static_cast<int>(cur.integer("experiment", "lambda_points", 50));
    if (cfg.exp.lambda_points < 1)
        throw ConfigError("'experiment.lambda_points' must be at least 1");
    cfg.exp.theta_points = static_cast<int>(cur.integer("experiment", "theta_points", 1001));
    if (cfg.exp.theta_points < 2)
        throw ConfigError("'experiment.theta_points' must be at least 2");
    cfg.exp.threads = static_cast<int>(cur.integer("experiment", "threads", 0));
    if (cfg.exp.threads < 0)
        throw ConfigError("'experiment.threads' must be non-negative");

    // Sweep grids.
    cfg.exp.nb_list = cur.list("grid", "nb_list", cfg.exp.nb_list);
    cfg.exp.n0_list = cur.list("grid", "n0_list", cfg.exp.n0_list);
    cfg.exp.k0_db_list = cur.list("grid", "k0_db_list", cfg.exp.k0_db_list);
    cfg.exp.k1_db_list = cur.list("grid", "k1_db_list", cfg.exp.k1_db_list);
    cfg.exp.sigma1_db_list = cur.list("grid", "sigma1_db_list", cfg.exp.sigma1_db_list);

    cur.finish();

    cfg.prior_legit = prior;

    // Resolve the attacker array size: 0 means "just enough".
    if (mal_n > 0) {
        cfg.scn.veh_mal = build_array(mal_kind, mal_n, mal_spacing, carrier_hz, light_speed);
    } else {
        int resolved = 2;
        try {
            resolved = std::max(2, min_antennas(cfg.scn));
        } catch (const InfeasibleAttack&) {
        } catch (const UnboundedAntennas&) {
        }
        cfg.scn.veh_mal = build_array(mal_kind, resolved, mal_spacing, carrier_hz, light_speed);
    }

    return cfg;
}

ParsedConfig parse_config(const std::string& text) {
    return interpret(parse_ini(text));
}

ConfigStore load_config_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw std::ios_base::failure("cannot read config file '" + path + "'");
    return parse_ini(buffer.str());
}

ParsedConfig load_config_file(const std::string& path) {
    return interpret(load_config_store(path));
}

} // namespace lvs
