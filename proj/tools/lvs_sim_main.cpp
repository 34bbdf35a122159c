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
// lvs-sim: run one experiment described by an INI config file and write the
// result table as CSV.
//
//   lvs-sim <experiment> --config <file> [--seed N] [--trials N]
//           [--out path] [--set key=value]...
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible scenario,
// 4 I/O error, 1 unexpected failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lvs/config.hpp"
#include "lvs/errors.hpp"
#include "lvs/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

int run(const std::string& experiment, const std::string& config_path,
        const std::optional<std::int64_t>& seed, const std::optional<std::int64_t>& trials,
        const std::string& out_path, const std::vector<std::string>& overrides) {
    lvs::ConfigStore store = lvs::load_config_store(config_path);
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw lvs::ConfigError("--set expects key=value, got '" + kv + "'");
        store.override_value(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed)
        store.override_value("experiment.seed", std::to_string(*seed));
    if (trials)
        store.override_value("experiment.trials", std::to_string(*trials));

    const lvs::ParsedConfig cfg = lvs::interpret(store);
    const lvs::ExperimentTable table = lvs::run_experiment(cfg, experiment);
    lvs::write_csv_file(table, out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location verification simulator: channel model, optimal "
                 "impersonation attack, likelihood-ratio verifier, and Monte "
                 "Carlo validation of the closed-form error rates."};
    app.name("lvs-sim");

    std::string experiment;
    std::string config_path;
    std::string out_path = "-";
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> trials;
    std::vector<std::string> overrides;

    std::string experiment_help = "Experiment to run (";
    for (std::size_t i = 0; i < lvs::experiment_names().size(); ++i)
        experiment_help += (i ? ", " : "") + lvs::experiment_names()[i];
    experiment_help += ")";

    app.add_option("experiment", experiment, experiment_help)->required();
    app.add_option("-c,--config", config_path, "INI config file describing the scenario")
        ->required();
    app.add_option("-s,--seed", seed, "Override [experiment] seed");
    app.add_option("-n,--trials", trials,
                   "Override [experiment] trials (0 = analytic columns only)");
    app.add_option("-o,--out", out_path, "Output CSV path ('-' = stdout)")
        ->capture_default_str();
    app.add_option("--set", overrides,
                   "Override a config value as section.key=value (repeatable)")
        ->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        return run(experiment, config_path, seed, trials, out_path, overrides);
    } catch (const lvs::ConfigError& e) {
        std::cerr << "lvs-sim: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const lvs::InfeasibleAttack& e) {
        std::cerr << "lvs-sim: infeasible scenario: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const lvs::InfeasibleTrack& e) {
        std::cerr << "lvs-sim: infeasible scenario: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const lvs::UnboundedAntennas& e) {
        std::cerr << "lvs-sim: infeasible scenario: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const lvs::ConstrainedRegime& e) {
        std::cerr << "lvs-sim: infeasible scenario: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "lvs-sim: I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "lvs-sim: error: " << e.what() << '\n';
        return kExitUnexpected;
    }
}
