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
// Empirical validation harness: hypothesis-conditioned observation sampling,
// rate estimation with binomial error bars, threshold sweeps, and parameter
// grids. Results are bit-identical for a given seed regardless of the worker
// count: every trial draws from its own counter-derived random stream.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lvs/attack.hpp"
#include "lvs/detector.hpp"
#include "lvs/geometry.hpp"
#include "lvs/rng.hpp"
#include "lvs/tracking.hpp"

namespace lvs {

/// Simulation batch settings.
struct TrialConfig {
    std::uint64_t trials = 100000; ///< Monte Carlo repetitions (>= 1)
    std::uint64_t seed = 1; ///< master seed; every trial derives its own streams
    double jitter_std = 0.0; ///< claimed-position error scale in meters (0 = off)
    int t_min = 1; ///< smallest tracking window length (inclusive)
    int t_max = 1; ///< largest tracking window length (inclusive)
    double prior_legit = 0.5; ///< prior P(legitimate) used for the total error
    int threads = 0; ///< worker count; 0 = automatic
};

/// One estimated rate with normal-approximation and Wilson error bars.
struct RateEstimate {
    double value = 0.0;
    double std_error = 0.0; ///< sqrt(r (1-r) / trials)
    double wilson_lo = 0.0; ///< 95% Wilson interval
    double wilson_hi = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

/// Empirical rates for one operating point next to their closed forms.
struct EmpiricalReport {
    RateEstimate alpha_hat; ///< estimated false-positive rate
    RateEstimate beta_hat; ///< estimated detection rate
    RatePair analytic; ///< closed forms for the nominal (jitter-free) scenario
    double total_error_hat = 0.0; ///< prior-weighted empirical total error
    double runtime_ms = 0.0;
};

/// Number of workers to use: `requested` when positive, otherwise the
/// hardware concurrency; either is capped by the LVS_SIM_THREADS environment
/// variable when it parses to a positive integer.
int resolve_thread_count(int requested);

/// Displace a claimed position by a 2-D Gaussian localization error whose
/// mean displacement magnitude is jitter_std * sqrt(pi) / 2 (per-axis std is
/// jitter_std / sqrt(2)). Resamples (bounded retries) if the displaced point
/// falls onto the receiver.
PolarPoint apply_jitter(const PolarPoint& claimed, double jitter_std, RngStream& rng);

/// Simulate the single-slot verifier at one threshold: legitimate
/// observations under H0 and worst-case attack observations (aimed at
/// `theta1`) under H1. With jitter enabled each trial displaces the claim by
/// a random localization error and rebuilds the models, the attack, and the
/// channel draws against it, so the estimates average the operating point
/// over the error ensemble.
EmpiricalReport run_single_slot(const Scenario& scn, double theta1, double lambda,
                                const TrialConfig& cfg);

/// Threshold sweep sharing one set of observation draws across all lambdas
/// (common random numbers), one report per threshold.
std::vector<EmpiricalReport> run_roc(const Scenario& scn, double theta1,
                                     const std::vector<double>& lambdas, const TrialConfig& cfg);

/// Simulate the multi-slot verifier: per trial a window length T is drawn
/// uniformly from [t_min, t_max] (clipped to the trajectory length), the
/// attacker track is built under the movement constraints, per-slot
/// observations are simulated, and the window decision rule is applied.
EmpiricalReport run_tracking(const Trajectory& traj, const Scenario& scn, double r_u,
                             AttackMode mode, double lambda, const TrialConfig& cfg);

/// Cartesian-product parameter sweep with a stable row order (first axis
/// slowest). The evaluator maps one grid point to one output row.
std::vector<std::vector<double>> sweep(
    const std::vector<std::vector<double>>& axes,
    const std::function<std::vector<double>(const std::vector<double>&)>& evaluator);

} // namespace lvs
