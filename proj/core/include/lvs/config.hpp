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
//
// INI-style configuration: sectioned key = value text describing a scenario,
// the optional tracking geometry, experiment settings, and sweep grids.
// Keys ending in _db are decibel values converted to linear scale; keys
// ending in _pi are angles in units of pi. Errors carry line/column.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lvs/attack.hpp"
#include "lvs/errors.hpp"
#include "lvs/geometry.hpp"
#include "lvs/tracking.hpp"

namespace lvs {

/// One raw `key = value` entry with its source position.
struct ConfigEntry {
    std::string value;
    int line = 0;
    int column = 0;
};

/// Raw parsed configuration text: section -> key -> entry. Keeping the raw
/// form around lets command-line overrides replace entries before the
/// semantic pass runs.
class ConfigStore {
public:
    /// Insert or replace an entry.
    void set(const std::string& section, const std::string& key, const std::string& value,
             int line = 0, int column = 0);

    const ConfigEntry* find(const std::string& section, const std::string& key) const;

    /// Replace the value of `key`, addressed either as "section.key" or as a
    /// bare key that is unique across all sections. Throws ConfigError when
    /// the key is unknown or ambiguous.
    void override_value(const std::string& key, const std::string& value);

    const std::map<std::string, std::map<std::string, ConfigEntry>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, ConfigEntry>> sections_;
};

/// Tracking geometry settings from the [track] section.
struct TrackSettings {
    double speed_mps = 20.0 / 3.6;
    double dt = 0.1;
    int t_count = 10;
    AttackMode mode = AttackMode::on_road;
    double r_u = 3.0;
    bool radial_road = true; ///< false: straight road along `bearing`
    double bearing = 0.0; ///< travel direction for the straight-road factory
    bool bearing_auto = true; ///< derive bearing from the claimed azimuth
};

/// Experiment harness settings from the [experiment] and [grid] sections.
struct ExperimentSettings {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double jitter_std = 0.0;
    double lambda = 0.0;
    bool lambda_auto = true; ///< use the Bayes threshold for the prior
    double log_lambda_min = -6.0;
    double log_lambda_max = 6.0;
    int lambda_points = 50;
    int theta_points = 1001;
    int threads = 0;
    std::vector<double> nb_list{2, 4, 6, 8};
    std::vector<double> n0_list{2, 4, 6, 8};
    std::vector<double> k0_db_list; ///< empty: keep the scenario's K factor
    std::vector<double> k1_db_list{-10, -5, 0, 5, 10};
    std::vector<double> sigma1_db_list{-10, -5, 0, 5, 10};
};

/// Fully interpreted configuration.
struct ParsedConfig {
    Scenario scn;
    double prior_legit = 0.5; ///< prior probability that a claim is genuine
    double theta1 = 0.0; ///< attack azimuth under study
    bool theta1_auto = true; ///< true: use the best allowed azimuth
    TrackSettings track;
    ExperimentSettings exp;
};

/// Parse INI text into raw entries. Throws ConfigError on malformed syntax.
ConfigStore parse_ini(const std::string& text);

/// Semantic pass: units, defaults, required keys, unknown-key rejection.
/// Throws ConfigError pointing at the offending entry.
ParsedConfig interpret(const ConfigStore& store);

/// parse_ini + interpret in one step.
ParsedConfig parse_config(const std::string& text);

/// Read a file and parse it. Throws std::ios_base::failure when the file
/// cannot be read.
ParsedConfig load_config_file(const std::string& path);

/// Read a file into a raw store (for override-then-interpret flows).
ConfigStore load_config_store(const std::string& path);

} // namespace lvs
