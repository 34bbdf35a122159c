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

#include <vector>

#include "lvs/channel.hpp"
#include "lvs/errors.hpp"

namespace lvs {

// Closed angular interval [lo, hi] within (-pi, pi] that the attacker cannot
// occupy (e.g. a blocked line of sight).  Wrap-around regions are expressed
// as two intervals.
struct AngleInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Full system description for one claimed location.
struct Scenario {
    ArrayGeometry bs{};                        // base-station receive ULA
    ArrayGeometry veh_legit{};                 // legitimate vehicle array
    ArrayGeometry veh_mal{};                   // attacker array (ULA or UCA)
    PolarPoint claimed{};                      // claimed position x_c
    ChannelParams legit_chan{};                // legitimate link
    ChannelParams mal_chan{};                  // attacker link (tx_power set by the attack)
    double r_l = 1.0;                          // minimum attacker standoff from x_c, meters
    std::vector<AngleInterval> forbidden_angles{};
    double psi_legit = 0.5 * kPi;              // legitimate array orientation
    double psi_mal = 0.5 * kPi;                // attacker array orientation (phi1 for a UCA)
};

// The attacker's optimized strategy against one claimed location.
struct AttackPlan {
    double theta1_star = 0.0; // best true azimuth
    double p1_star = 0.0;     // covariance-matching transmit power
    arma::cx_vec b1_star;     // unit-norm beamformer
    int n1_star = 2;          // minimum antennas for exact mean imitation
    double min_kl = 0.0;      // divergence floor at theta1_star
};

// Received legitimate power p0 * g(d0) at the claimed range.
double received_power_legit(const Scenario& scn);

// Scale the legitimate transmit power so that p0 * g(d0) equals the given
// value (convenient when a study pins the received power directly).
void set_received_power(Scenario& scn, double received_power);

// True azimuth is feasible if it avoids every forbidden interval.
bool angle_allowed(const Scenario& scn, double theta);

// Distribution of the snapshot under the legitimate hypothesis: mean along
// the claimed-direction steering vector, scalar covariance.
GaussianObsModel legit_model(const Scenario& scn);

// Mean the optimal attacker aims for from azimuth theta1: the projection of
// the legitimate mean onto the attacker's steering direction.
arma::cx_vec attack_target_mean(const Scenario& scn, double theta1);

// Distribution of the snapshot under the optimal attack from theta1; its
// covariance equals the legitimate one by power matching.
GaussianObsModel worst_case_attack_model(const Scenario& scn, double theta1);

// Distribution of the snapshot for an arbitrary attack (power p1, unit-norm
// beamformer b1) from azimuth theta1 at range d1.
GaussianObsModel attack_model(const Scenario& scn, double d1, double theta1, double psi1,
                              double p1, const arma::cx_vec& b1);

// Transmit power that makes the attacker's receive covariance equal the
// legitimate one.  Throws InfeasibleAttack when the attacker noise floor is
// already above the legitimate diffuse-plus-noise level.
double optimal_power(const Scenario& scn, double d1);

// Minimum attacker antenna count for exact mean imitation (>= 2).  Throws
// UnboundedAntennas when the attacker K factor is numerically zero.
int min_antennas(const Scenario& scn);

// Beamformer achieving exact imitation of the target mean; requires
// veh_mal.n >= min_antennas (otherwise throws ConstrainedRegime).
arma::cx_vec optimal_beamformer(const Scenario& scn, double d1, double theta1, double psi1);

// Best beamformer under the unit-magnitude clamp on the principal component;
// valid for any veh_mal.n >= 2 and any transmit power p1.
arma::cx_vec constrained_beamformer(const Scenario& scn, double d1, double theta1, double psi1,
                                    double p1);

// Divergence of model1 from model0 for scalar-covariance complex Gaussians:
// n*(rho - 1 - log(rho)) + ||m0 - m1||^2 / cov0, rho = cov1/cov0.
double kl_divergence(const GaussianObsModel& model0, const GaussianObsModel& model1);

// Divergence floor over all attacker powers and beamformers at azimuth
// theta1; depends only on the claimed link and the steering correlation.
double min_kl_at(const Scenario& scn, double theta1);

// Azimuth maximizing the steering correlation over the allowed set; ties are
// broken towards the smallest |theta1 - theta_c|.
double optimal_theta(const Scenario& scn);

// Assemble the full optimized strategy at range d1.  veh_mal.n must be at
// least the imitation minimum.
AttackPlan make_attack_plan(const Scenario& scn, double d1);

} // namespace lvs
