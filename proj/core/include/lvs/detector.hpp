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
// Likelihood-ratio location verification: test statistic, decision threshold,
// and closed-form false-positive / detection rates under a worst-case
// (variance-matched) attack.

#pragma once

#include <armadillo>

#include "lvs/attack.hpp"
#include "lvs/channel.hpp"

namespace lvs {

/// A false-positive / detection rate pair for one operating point.
struct RatePair {
    double false_positive = 0.0; ///< P(decide malicious | legitimate)
    double detection = 0.0; ///< P(decide malicious | malicious)
};

/// Below this divergence (equivalently, squared mean shift over cov0) the two
/// hypotheses are treated as numerically identical: decisions become constant
/// in the observation, and the closed-form rates collapse to the indicator of
/// log(lambda) <= 0.  Keeps (log lambda +- D)/sqrt(2D) away from 0/0 and keeps
/// simulated decisions from flipping on rounding crumbs of m1 - m0.
inline constexpr double kDegenerateShiftFloor = 1e-12;

/// Upper-tail probability of the standard normal distribution.
double q_function(double x);

/// Inverse of q_function on (0, 1); bisection plus Newton polish.
double q_function_inv(double p);

/// Linear statistic equivalent to the log likelihood ratio when both
/// hypotheses share the same spherical covariance:
/// 2 Re{(m1 - m0)^H y} / cov0.
double test_statistic(const arma::cx_vec& y, const GaussianObsModel& model0,
                      const GaussianObsModel& model1);

/// Decision threshold paired with test_statistic:
/// log(lambda) + Re{(m1 - m0)^H (m1 + m0)} / cov0.
double threshold_gamma(const GaussianObsModel& model0, const GaussianObsModel& model1,
                       double lambda);

/// True when the observation is flagged as malicious (statistic >= threshold).
/// When the means coincide the decision is constant: malicious iff
/// log(lambda) <= 0.
bool decide(const arma::cx_vec& y, const GaussianObsModel& model0,
            const GaussianObsModel& model1, double lambda);

/// Closed-form rates as a function of the divergence between the hypotheses
/// when the attack matches the legitimate covariance:
///   false_positive = Q((log lambda + D) / sqrt(2 D)),
///   detection      = Q((log lambda - D) / sqrt(2 D)).
/// For D below 1e-12 the distributions coincide and both rates collapse to
/// the indicator of log lambda <= 0.
RatePair rates_from_kl(double kl, double lambda);

/// Closed-form rates for the worst-case attack aimed at azimuth `theta1`
/// against the scenario's claimed location.
RatePair analytic_rates(const Scenario& scn, double theta1, double lambda);

/// Exact rates of the linear statistic for two explicit observation models,
/// including a covariance mismatch between them; reduces to rates_from_kl
/// when the covariances match.
RatePair rates_for_models(const GaussianObsModel& model0, const GaussianObsModel& model1,
                          double lambda);

/// Prior-weighted total error: P0 * fp + (1 - P0) * (1 - detection).
double total_error(const RatePair& rates, double prior_legit);

/// Threshold that minimizes the total error: lambda* = P0 / (1 - P0).
double bayes_threshold(double prior_legit);

/// Minimum total error achievable at divergence `kl` using the Bayes
/// threshold for the given prior.
double min_total_error(double kl, double prior_legit);

} // namespace lvs
