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
// Named experiments over a parsed configuration, each producing one table:
//   roc                threshold sweep of the single-slot verifier
//   kl-map             minimum divergence versus attack azimuth
//   total-error-grid   minimum total error over array-size (and K) grids
//   min-antennas-grid  attacker antenna bound over K1 x sigma1^2 grids
//   track              multi-slot verifier versus window length
//   correlation        steering correlation versus attack azimuth
// Analytic columns are always filled; Monte Carlo columns are empty when
// trials = 0. Cells are serialized as shortest-round-trip decimals; NaN
// serializes as an empty cell.

#pragma once

#include <string>
#include <vector>

#include "lvs/config.hpp"

namespace lvs {

/// One experiment's output: column names plus numeric rows (NaN = empty).
struct ExperimentTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// The recognized experiment names, in documentation order.
const std::vector<std::string>& experiment_names();

/// Run a named experiment. Throws ConfigError for unknown names, and
/// propagates infeasibility errors from the underlying scenario.
ExperimentTable run_experiment(const ParsedConfig& cfg, const std::string& name);

/// Serialize a table as CSV: comma separators, CRLF row endings, '.' decimal
/// point, shortest-round-trip doubles, NaN as empty cells.
std::string to_csv(const ExperimentTable& table);

/// Write CSV to a file (or to stdout when path is "-"). Throws
/// std::ios_base::failure on write errors.
void write_csv_file(const ExperimentTable& table, const std::string& path);

} // namespace lvs
