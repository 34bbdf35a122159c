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

#pragma once

#include <stdexcept>
#include <string>

namespace lvs {

// The attacker cannot match the legitimate receive covariance with any finite
// transmit power (its own noise floor is already too high).
class InfeasibleAttack : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// No finite antenna count lets the attacker imitate the legitimate mean;
// raised when the attacker's Rician K factor is (numerically) zero.
class UnboundedAntennas : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The attacker has fewer antennas than the exact-imitation minimum; the
// unconstrained beamformer does not exist and the clamped variant applies.
class ConstrainedRegime : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A tracking slot has an empty feasible position set under the standoff and
// per-slot movement constraints.
class InfeasibleTrack : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Config-file syntax or validation failure, with 1-based source location.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(format(message, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

  private:
    static std::string format(const std::string& message, int line, int column) {
        if (line <= 0)
            return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    int line_;
    int column_;
};

} // namespace lvs
