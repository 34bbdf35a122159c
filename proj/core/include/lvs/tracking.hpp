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
// Multi-slot location verification: claimed trajectories, the attacker's
// movement-constrained position sequence, additive divergence, and the
// product-form decision rule.

#pragma once

#include <vector>

#include <armadillo>

#include "lvs/attack.hpp"
#include "lvs/channel.hpp"
#include "lvs/detector.hpp"
#include "lvs/geometry.hpp"

namespace lvs {

/// One slot of a claimed trajectory: the reported position and the
/// legitimate channel parameters in effect at that slot.
struct TrajectorySlot {
    PolarPoint claimed;
    ChannelParams legit_chan;
};

/// A claimed trajectory sampled at a fixed slot rate. `bearing` is the
/// Cartesian direction of travel; both factory functions place every slot on
/// the straight line through the first point along that bearing.
struct Trajectory {
    std::vector<TrajectorySlot> slots;
    double dt = 0.1; ///< slot duration in seconds
    double speed_mps = 0.0; ///< constant ground speed
    double bearing = 0.0; ///< direction of travel, radians in (-pi, pi]
};

/// Where the attacker is allowed to place itself.
enum class AttackMode {
    on_road, ///< confined to the claimed trajectory's line
    free_roam ///< anywhere in the plane
};

/// Attacker state for one slot: chosen position plus the synthesized attack.
struct AttackTrackPoint {
    PolarPoint position;
    AttackPlan plan;
};

/// The attacker's position/attack sequence and its per-slot movement limit.
struct AttackTrack {
    std::vector<AttackTrackPoint> points;
    double r_u = 0.0; ///< maximum displacement between consecutive slots (m)
};

/// Straight-line trajectory headed directly at the receiver: slot t sits at
/// distance d(1) - (t-1)*speed*dt on the fixed azimuth of `start`. Throws
/// std::domain_error if the path reaches the origin within t_count slots.
Trajectory make_trajectory(const PolarPoint& start, double speed_mps, double dt, int t_count,
                           const ChannelParams& legit_chan);

/// Straight-line trajectory along an arbitrary road: slot t sits at the
/// Cartesian point start + (t-1)*speed*dt * (cos bearing, sin bearing).
/// Throws std::domain_error if the path passes through the origin.
Trajectory make_road_trajectory(const PolarPoint& start, double bearing, double speed_mps,
                                double dt, int t_count, const ChannelParams& legit_chan);

/// The single-slot scenario in effect at `slot_index` (0-based): the base
/// scenario with the claimed point and legitimate channel swapped in.
Scenario scenario_at(const Scenario& base, const Trajectory& traj, std::size_t slot_index);

/// Greedy per-slot attacker placement: slot 1 maximizes the steering
/// correlation over the feasible set; each later slot does the same subject
/// to the offset floor ||x_c(t) - x_1(t)|| >= r_l and the movement cap
/// ||x_1(t-1) - x_1(t)|| <= r_u. Throws InfeasibleTrack when a slot has an
/// empty feasible set.
std::vector<PolarPoint> attack_positions(const Trajectory& traj, const Scenario& scn,
                                         double r_u, AttackMode mode);

/// On-road placement with the road line pinned explicitly to `road_base` /
/// `road_bearing` instead of the trajectory's own first slot. Used when the
/// claimed points scatter off the physical road (position-error studies).
std::vector<PolarPoint> attack_positions_on_line(const Trajectory& traj, const Scenario& scn,
                                                 double r_u, const Cartesian& road_base,
                                                 double road_bearing);

/// Placement rebuild tolerant of infeasible slots: any slot whose constrained
/// set is empty is re-anchored as a fresh start (the movement cap is waived
/// for that slot only). Used for per-trial rebuilds against noisy claimed
/// points, where strict slot-to-slot feasibility may not exist. In on_road
/// mode the line is pinned to `road_base` / `road_bearing`; both are ignored
/// in free_roam mode.
std::vector<PolarPoint> resilient_attack_positions(const Trajectory& traj, const Scenario& scn,
                                                   double r_u, AttackMode mode,
                                                   const Cartesian& road_base,
                                                   double road_bearing);

/// attack_positions plus the full per-slot attack synthesis (power,
/// beamformer, antenna bound, divergence).
AttackTrack constrained_attack_track(const Trajectory& traj, const Scenario& scn, double r_u,
                                     AttackMode mode);

/// Sum of the per-slot minimum divergences along the track.
double track_kl(const AttackTrack& track, const Trajectory& traj, const Scenario& scn);

/// Closed-form rates of the multi-slot detector; identical in structure to
/// the single-slot rates with the divergence replaced by the track sum.
RatePair tracking_rates(double track_kl_value, double lambda);

/// Sum of per-slot test statistics for a window of observations.
double tracking_test_statistic(const std::vector<arma::cx_vec>& ys,
                               const std::vector<GaussianObsModel>& models0,
                               const std::vector<GaussianObsModel>& models1);

/// Decision threshold paired with tracking_test_statistic.
double tracking_threshold(const std::vector<GaussianObsModel>& models0,
                          const std::vector<GaussianObsModel>& models1, double lambda);

/// True when the observation window is flagged as malicious.
bool tracking_decide(const std::vector<arma::cx_vec>& ys,
                     const std::vector<GaussianObsModel>& models0,
                     const std::vector<GaussianObsModel>& models1, double lambda);

} // namespace lvs
