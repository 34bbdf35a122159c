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

#include "lvs/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "lvs/errors.hpp"

namespace lvs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949; // golden-section step ratio

double hypot2(double x, double y) {
    return std::hypot(x, y);
}

// ---------- shared feasibility/objective helpers ----------

struct SlotContext {
    const Scenario* scn = nullptr; // scenario with slot-t claimed point
    Cartesian claimed_xy{};
    double r_l = 0.0;
};

bool position_ok(const SlotContext& ctx, const Cartesian& pos) {
    const double d = hypot2(pos.x, pos.y);
    if (!(d > 1e-12))
        return false;
    if (distance(pos, ctx.claimed_xy) < ctx.r_l)
        return false;
    return angle_allowed(*ctx.scn, std::atan2(pos.y, pos.x));
}

double position_value(const SlotContext& ctx, const Cartesian& pos) {
    if (!position_ok(ctx, pos))
        return kNegInf;
    const double theta = std::atan2(pos.y, pos.x);
    return correlation_mag_sq(ctx.scn->claimed.theta, theta, ctx.scn->bs);
}

// ---------- on-road search (1-D along the trajectory line) ----------

struct RoadLine {
    Cartesian base{}; // slot-1 claimed point
    double ux = 1.0;
    double uy = 0.0;
};

Cartesian road_point(const RoadLine& line, double s) {
    return Cartesian{line.base.x + s * line.ux, line.base.y + s * line.uy};
}

double road_value(const SlotContext& ctx, const RoadLine& line, double s) {
    return position_value(ctx, road_point(line, s));
}

// Golden-section maximization of the guarded objective on [lo, hi].
double golden_polish_road(const SlotContext& ctx, const RoadLine& line, double lo, double hi) {
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = road_value(ctx, line, x1);
    double f2 = road_value(ctx, line, x2);
    int iter = 0;
    while (hi - lo > 1e-10 && iter++ < 200) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = road_value(ctx, line, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = road_value(ctx, line, x1);
        }
    }
    return 0.5 * (lo + hi);
}

// Line parameter where the ray from the origin at angle `theta` crosses the
// road, if it does so at positive range.
std::optional<double> ray_crossing(const RoadLine& line, double theta) {
    const double ex = std::cos(theta);
    const double ey = std::sin(theta);
    const double det = line.uy * ex - line.ux * ey;
    if (std::abs(det) < 1e-14)
        return std::nullopt; // road parallel to the ray
    const double s = (line.base.y * ex - line.base.x * ey) / det;
    const Cartesian pos = road_point(line, s);
    const double range = pos.x * ex + pos.y * ey;
    if (!(range > 1e-12))
        return std::nullopt; // crossing lies on the opposite ray
    return s;
}

struct RoadPick {
    double s = 0.0;
    double value = kNegInf;
    bool found = false;
};

// Evaluate a candidate and keep it if it beats the incumbent; ties prefer the
// candidate closest to the claimed slot, then the one closest to the road
// origin (deterministic ordering).
void consider_road(const SlotContext& ctx, const RoadLine& line, double s, double s_claimed,
                   RoadPick& pick) {
    const double v = road_value(ctx, line, s);
    if (v == kNegInf)
        return;
    const double tie = 1e-12 * ctx.scn->bs.n * ctx.scn->bs.n;
    if (!pick.found || v > pick.value + tie) {
        pick = RoadPick{s, v, true};
        return;
    }
    if (v > pick.value - tie) {
        const double cur = std::abs(s - s_claimed);
        const double old = std::abs(pick.s - s_claimed);
        if (cur < old - 1e-12 || (std::abs(cur - old) <= 1e-12 && std::abs(s) < std::abs(pick.s))) {
            pick.s = s;
            pick.value = std::max(pick.value, v);
        }
    }
}

// Search one closed interval [lo, hi] of road parameters.
void search_road_interval(const SlotContext& ctx, const RoadLine& line, double lo, double hi,
                          double s_claimed, int grid_points, RoadPick& pick) {
    if (lo > hi)
        return;
    consider_road(ctx, line, lo, s_claimed, pick);
    consider_road(ctx, line, hi, s_claimed, pick);
    if (hi - lo < 1e-14)
        return;
    const double step = (hi - lo) / (grid_points + 1);
    double best_grid = kNegInf;
    double best_s = lo;
    for (int i = 1; i <= grid_points; ++i) {
        const double s = lo + i * step;
        const double v = road_value(ctx, line, s);
        if (v > best_grid) {
            best_grid = v;
            best_s = s;
        }
    }
    if (best_grid > kNegInf) {
        const double polished = golden_polish_road(ctx, line, std::max(lo, best_s - step),
                                                   std::min(hi, best_s + step));
        consider_road(ctx, line, best_s, s_claimed, pick);
        consider_road(ctx, line, polished, s_claimed, pick);
    }
    // Exact crossings with the perfect-imitation rays, when inside.
    for (double theta : {ctx.scn->claimed.theta, -ctx.scn->claimed.theta}) {
        if (const auto s = ray_crossing(line, theta))
            if (*s >= lo && *s <= hi)
                consider_road(ctx, line, *s, s_claimed, pick);
    }
}

// Offset-floor gap around the claimed point, as road parameters. Returns the
// open interval (lo, hi) that is too close to the claim, or nullopt when the
// whole line is feasible.
std::optional<std::pair<double, double>> claim_gap(const RoadLine& line, const Cartesian& claimed,
                                                   double r_l) {
    if (!(r_l > 0.0))
        return std::nullopt;
    const double s_proj =
        (claimed.x - line.base.x) * line.ux + (claimed.y - line.base.y) * line.uy;
    const Cartesian foot = road_point(line, s_proj);
    const double h = distance(foot, claimed);
    if (h >= r_l)
        return std::nullopt;
    // Tiny outward bias keeps the closed constraint satisfied under rounding.
    const double w = std::sqrt(r_l * r_l - h * h) * (1.0 + 1e-12) + 1e-15;
    return std::make_pair(s_proj - w, s_proj + w);
}

double pick_on_road_slot(const SlotContext& ctx, const RoadLine& line, double s_claimed,
                         std::optional<double> s_prev, double r_u, double window_half) {
    RoadPick pick;
    const auto gap = claim_gap(line, ctx.claimed_xy, ctx.r_l);

    double lo;
    double hi;
    int grid_points;
    if (s_prev) {
        lo = *s_prev - r_u;
        hi = *s_prev + r_u;
        grid_points = 255;
    } else {
        lo = s_claimed - window_half;
        hi = s_claimed + window_half;
        grid_points = 4000;
    }

    if (gap) {
        search_road_interval(ctx, line, lo, std::min(hi, gap->first), s_claimed, grid_points, pick);
        search_road_interval(ctx, line, std::max(lo, gap->second), hi, s_claimed, grid_points,
                             pick);
    } else {
        search_road_interval(ctx, line, lo, hi, s_claimed, grid_points, pick);
    }
    if (!pick.found)
        throw InfeasibleTrack("on-road attack: empty feasible set for a slot");
    return pick.s;
}

// ---------- free-roam search (2-D) ----------

struct FreePick {
    Cartesian pos{};
    double value = kNegInf;
    bool found = false;
};

void consider_free(const SlotContext& ctx, const Cartesian& pos, const Cartesian& anchor,
                   FreePick& pick) {
    const double v = position_value(ctx, pos);
    if (v == kNegInf)
        return;
    const double tie = 1e-12 * ctx.scn->bs.n * ctx.scn->bs.n;
    if (!pick.found || v > pick.value + tie) {
        pick = FreePick{pos, v, true};
        return;
    }
    if (v > pick.value - tie) {
        const double cur = distance(pos, anchor);
        const double old = distance(pick.pos, anchor);
        if (cur < old - 1e-12) {
            pick.pos = pos;
            pick.value = std::max(pick.value, v);
        }
    }
}

// Positive-range crossings of the ray at `theta` with a circle of radius
// `radius` around `center`.
void ray_circle_candidates(double theta, const Cartesian& center, double radius,
                           std::vector<Cartesian>& out) {
    const double ex = std::cos(theta);
    const double ey = std::sin(theta);
    const double b = center.x * ex + center.y * ey; // projection of the center
    const double c = center.x * center.x + center.y * center.y - radius * radius;
    const double disc = b * b - c;
    if (disc < 0.0)
        return;
    const double root = std::sqrt(disc);
    for (double range : {b - root, b + root})
        if (range > 1e-12)
            out.push_back(Cartesian{range * ex, range * ey});
    // Closest approach of the ray to the center, when it lies on the ray.
    if (b > 1e-12)
        out.push_back(Cartesian{b * ex, b * ey});
}

Cartesian pick_free_slot(const SlotContext& ctx, const Cartesian& prev, double r_u,
                         const std::vector<double>& target_angles) {
    FreePick pick;
    // Staying put is always a candidate (and the only one when r_u == 0).
    consider_free(ctx, prev, prev, pick);

    if (r_u > 0.0) {
        const double r_step = r_u * (1.0 - 1e-12); // inward bias for the cap
        // Boundary sweep of the movement disc.
        constexpr int kSweep = 720;
        double best_phi = 0.0;
        double best_v = kNegInf;
        for (int i = 0; i < kSweep; ++i) {
            const double phi = -kPi + (i + 1) * (2.0 * kPi / kSweep);
            const Cartesian pos{prev.x + r_step * std::cos(phi), prev.y + r_step * std::sin(phi)};
            const double v = position_value(ctx, pos);
            consider_free(ctx, pos, prev, pick);
            if (v > best_v) {
                best_v = v;
                best_phi = phi;
            }
        }
        if (best_v > kNegInf) {
            // Golden polish on the boundary angle.
            double lo = best_phi - 2.0 * kPi / kSweep;
            double hi = best_phi + 2.0 * kPi / kSweep;
            const auto bval = [&](double phi) {
                const Cartesian pos{prev.x + r_step * std::cos(phi),
                                    prev.y + r_step * std::sin(phi)};
                return position_value(ctx, pos);
            };
            double x1 = hi - kInvPhi * (hi - lo);
            double x2 = lo + kInvPhi * (hi - lo);
            double f1 = bval(x1);
            double f2 = bval(x2);
            int iter = 0;
            while (hi - lo > 1e-12 && iter++ < 200) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + kInvPhi * (hi - lo);
                    f2 = bval(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - kInvPhi * (hi - lo);
                    f1 = bval(x1);
                }
            }
            const double phi = 0.5 * (lo + hi);
            consider_free(ctx, Cartesian{prev.x + r_step * std::cos(phi),
                                         prev.y + r_step * std::sin(phi)},
                          prev, pick);
        }
        // Exact ray candidates: crossings with the movement boundary, the
        // closest approach inside the disc, and crossings with the offset
        // floor around the claim.
        std::vector<Cartesian> ray_pts;
        for (double theta : target_angles) {
            ray_circle_candidates(theta, prev, r_step, ray_pts);
            ray_circle_candidates(theta, ctx.claimed_xy, ctx.r_l * (1.0 + 1e-12) + 1e-15, ray_pts);
        }
        for (const Cartesian& pos : ray_pts)
            if (distance(pos, prev) <= r_u)
                consider_free(ctx, pos, prev, pick);
        // Coarse interior safety net.
        for (int ri = 1; ri <= 6; ++ri) {
            const double rad = r_step * ri / 6.0;
            for (int ai = 0; ai < 60; ++ai) {
                const double phi = -kPi + (ai + 1) * (2.0 * kPi / 60);
                consider_free(ctx, Cartesian{prev.x + rad * std::cos(phi),
                                             prev.y + rad * std::sin(phi)},
                              prev, pick);
            }
        }
    }
    if (!pick.found)
        throw InfeasibleTrack("free-roam attack: empty feasible set for a slot");
    return pick.pos;
}

void check_trajectory_inputs(const PolarPoint& start, double speed_mps, double dt, int t_count) {
    if (!(start.d > 0.0))
        throw std::domain_error("trajectory: starting distance must be positive");
    if (speed_mps < 0.0)
        throw std::domain_error("trajectory: speed must be non-negative");
    if (!(dt > 0.0))
        throw std::domain_error("trajectory: slot duration must be positive");
    if (t_count < 1)
        throw std::domain_error("trajectory: slot count must be at least 1");
}

} // namespace

// ---------- trajectories ----------

Trajectory make_trajectory(const PolarPoint& start, double speed_mps, double dt, int t_count,
                           const ChannelParams& legit_chan) {
    check_trajectory_inputs(start, speed_mps, dt, t_count);
    Trajectory traj;
    traj.dt = dt;
    traj.speed_mps = speed_mps;
    traj.bearing = normalize_angle(start.theta + kPi); // straight at the receiver
    traj.slots.reserve(static_cast<std::size_t>(t_count));
    for (int t = 0; t < t_count; ++t) {
        const double d = start.d - t * speed_mps * dt;
        if (!(d > 0.0))
            throw std::domain_error("trajectory reaches the receiver within the window");
        traj.slots.push_back(TrajectorySlot{make_polar(d, start.theta), legit_chan});
    }
    return traj;
}

Trajectory make_road_trajectory(const PolarPoint& start, double bearing, double speed_mps,
                                double dt, int t_count, const ChannelParams& legit_chan) {
    check_trajectory_inputs(start, speed_mps, dt, t_count);
    Trajectory traj;
    traj.dt = dt;
    traj.speed_mps = speed_mps;
    traj.bearing = normalize_angle(bearing);
    traj.slots.reserve(static_cast<std::size_t>(t_count));
    const Cartesian base = to_cartesian(start);
    const double ux = std::cos(traj.bearing);
    const double uy = std::sin(traj.bearing);
    for (int t = 0; t < t_count; ++t) {
        const double s = t * speed_mps * dt;
        const Cartesian pos{base.x + s * ux, base.y + s * uy};
        if (!(std::hypot(pos.x, pos.y) > 1e-12))
            throw std::domain_error("trajectory passes through the receiver");
        traj.slots.push_back(TrajectorySlot{to_polar(pos), legit_chan});
    }
    return traj;
}

Scenario scenario_at(const Scenario& base, const Trajectory& traj, std::size_t slot_index) {
    if (slot_index >= traj.slots.size())
        throw std::out_of_range("scenario_at: slot index out of range");
    Scenario scn = base;
    scn.claimed = traj.slots[slot_index].claimed;
    scn.legit_chan = traj.slots[slot_index].legit_chan;
    return scn;
}

// ---------- attacker placement ----------

namespace {

void check_placement_inputs(const Trajectory& traj, const Scenario& scn, double r_u) {
    if (traj.slots.empty())
        throw std::invalid_argument("attack_positions: empty trajectory");
    if (r_u < 0.0)
        throw std::domain_error("attack_positions: movement cap must be non-negative");
    if (scn.r_l < 0.0)
        throw std::domain_error("attack_positions: offset floor must be non-negative");
}

std::vector<PolarPoint> on_road_positions(const Trajectory& traj, const Scenario& scn, double r_u,
                                          const Cartesian& road_base, double road_bearing,
                                          bool reanchor_infeasible = false) {
    RoadLine line;
    line.base = road_base;
    line.ux = std::cos(road_bearing);
    line.uy = std::sin(road_bearing);

    // Claimed slots projected onto the road.
    std::vector<double> s_claimed(traj.slots.size());
    double span = 0.0;
    for (std::size_t t = 0; t < traj.slots.size(); ++t) {
        const Cartesian xc = to_cartesian(traj.slots[t].claimed);
        s_claimed[t] = (xc.x - line.base.x) * line.ux + (xc.y - line.base.y) * line.uy;
        span = std::max(span, std::abs(s_claimed[t]));
    }
    const double h0 = std::abs(line.base.x * line.uy - line.base.y * line.ux);
    const double window_half = span + std::max({10.0 * scn.r_l, 100.0 * h0 + 100.0, 1000.0});

    std::vector<PolarPoint> positions;
    positions.reserve(traj.slots.size());
    std::optional<double> s_prev;
    for (std::size_t t = 0; t < traj.slots.size(); ++t) {
        const Scenario scn_t = scenario_at(scn, traj, t);
        SlotContext ctx{&scn_t, to_cartesian(scn_t.claimed), scn_t.r_l};
        double s;
        if (reanchor_infeasible && s_prev) {
            try {
                s = pick_on_road_slot(ctx, line, s_claimed[t], s_prev, r_u, window_half);
            } catch (const InfeasibleTrack&) {
                s = pick_on_road_slot(ctx, line, s_claimed[t], std::nullopt, r_u, window_half);
            }
        } else {
            s = pick_on_road_slot(ctx, line, s_claimed[t], s_prev, r_u, window_half);
        }
        positions.push_back(to_polar(road_point(line, s)));
        s_prev = s;
    }
    return positions;
}

// Fresh attacker placement for a single slot in free-roam mode: the best
// allowed azimuth, placed just outside the offset floor.
Cartesian fresh_free_start(const Scenario& scn_t, const SlotContext& ctx) {
    const double theta_star = optimal_theta(scn_t);
    const double d1 = scn_t.claimed.d + scn_t.r_l * (1.0 + 1e-12) + 1e-15;
    const Cartesian pos = to_cartesian(make_polar(d1, theta_star));
    if (!position_ok(ctx, pos))
        throw InfeasibleTrack("free-roam attack: no feasible starting point");
    return pos;
}

std::vector<PolarPoint> free_roam_positions(const Trajectory& traj, const Scenario& scn,
                                            double r_u, bool reanchor_infeasible = false) {
    std::vector<PolarPoint> positions;
    positions.reserve(traj.slots.size());
    Cartesian prev{};
    for (std::size_t t = 0; t < traj.slots.size(); ++t) {
        const Scenario scn_t = scenario_at(scn, traj, t);
        SlotContext ctx{&scn_t, to_cartesian(scn_t.claimed), scn_t.r_l};
        if (t == 0) {
            prev = fresh_free_start(scn_t, ctx);
        } else {
            std::vector<double> targets{scn_t.claimed.theta,
                                        normalize_angle(-scn_t.claimed.theta)};
            targets.push_back(optimal_theta(scn_t));
            if (reanchor_infeasible) {
                try {
                    prev = pick_free_slot(ctx, prev, r_u, targets);
                } catch (const InfeasibleTrack&) {
                    prev = fresh_free_start(scn_t, ctx);
                }
            } else {
                prev = pick_free_slot(ctx, prev, r_u, targets);
            }
        }
        positions.push_back(to_polar(prev));
    }
    return positions;
}

} // namespace

std::vector<PolarPoint> attack_positions(const Trajectory& traj, const Scenario& scn, double r_u,
                                         AttackMode mode) {
    check_placement_inputs(traj, scn, r_u);
    if (mode == AttackMode::on_road)
        return on_road_positions(traj, scn, r_u, to_cartesian(traj.slots.front().claimed),
                                 traj.bearing);
    return free_roam_positions(traj, scn, r_u);
}

std::vector<PolarPoint> attack_positions_on_line(const Trajectory& traj, const Scenario& scn,
                                                 double r_u, const Cartesian& road_base,
                                                 double road_bearing) {
    check_placement_inputs(traj, scn, r_u);
    return on_road_positions(traj, scn, r_u, road_base, road_bearing);
}

std::vector<PolarPoint> resilient_attack_positions(const Trajectory& traj, const Scenario& scn,
                                                   double r_u, AttackMode mode,
                                                   const Cartesian& road_base,
                                                   double road_bearing) {
    check_placement_inputs(traj, scn, r_u);
    if (mode == AttackMode::on_road)
        return on_road_positions(traj, scn, r_u, road_base, road_bearing, true);
    return free_roam_positions(traj, scn, r_u, true);
}

AttackTrack constrained_attack_track(const Trajectory& traj, const Scenario& scn, double r_u,
                                     AttackMode mode) {
    const std::vector<PolarPoint> positions = attack_positions(traj, scn, r_u, mode);
    AttackTrack track;
    track.r_u = r_u;
    track.points.reserve(positions.size());
    for (std::size_t t = 0; t < positions.size(); ++t) {
        const Scenario scn_t = scenario_at(scn, traj, t);
        AttackPlan plan;
        plan.theta1_star = positions[t].theta;
        plan.p1_star = optimal_power(scn_t, positions[t].d);
        plan.n1_star = min_antennas(scn_t);
        plan.b1_star = optimal_beamformer(scn_t, positions[t].d, positions[t].theta, scn_t.psi_mal);
        plan.min_kl = min_kl_at(scn_t, positions[t].theta);
        track.points.push_back(AttackTrackPoint{positions[t], plan});
    }
    return track;
}

// ---------- multi-slot detector ----------

double track_kl(const AttackTrack& track, const Trajectory& traj, const Scenario& scn) {
    if (track.points.size() != traj.slots.size())
        throw std::invalid_argument("track_kl: track and trajectory lengths differ");
    double sum = 0.0;
    for (std::size_t t = 0; t < track.points.size(); ++t)
        sum += min_kl_at(scenario_at(scn, traj, t), track.points[t].plan.theta1_star);
    return sum;
}

RatePair tracking_rates(double track_kl_value, double lambda) {
    return rates_from_kl(track_kl_value, lambda);
}

double tracking_test_statistic(const std::vector<arma::cx_vec>& ys,
                               const std::vector<GaussianObsModel>& models0,
                               const std::vector<GaussianObsModel>& models1) {
    if (ys.size() != models0.size() || ys.size() != models1.size())
        throw std::invalid_argument("tracking_test_statistic: length mismatch");
    double sum = 0.0;
    for (std::size_t t = 0; t < ys.size(); ++t)
        sum += test_statistic(ys[t], models0[t], models1[t]);
    return sum;
}

double tracking_threshold(const std::vector<GaussianObsModel>& models0,
                          const std::vector<GaussianObsModel>& models1, double lambda) {
    if (models0.size() != models1.size())
        throw std::invalid_argument("tracking_threshold: length mismatch");
    if (!(lambda > 0.0))
        throw std::domain_error("tracking_threshold: lambda must be positive");
    double sum = std::log(lambda);
    for (std::size_t t = 0; t < models0.size(); ++t) {
        const arma::cx_vec diff = models1[t].mean - models0[t].mean;
        const arma::cx_vec tot = models1[t].mean + models0[t].mean;
        sum += std::real(arma::cdot(diff, tot)) / models0[t].cov_scalar;
    }
    return sum;
}

bool tracking_decide(const std::vector<arma::cx_vec>& ys,
                     const std::vector<GaussianObsModel>& models0,
                     const std::vector<GaussianObsModel>& models1, double lambda) {
    if (models0.size() != models1.size())
        throw std::invalid_argument("tracking_decide: length mismatch");
    if (!(lambda > 0.0))
        throw std::domain_error("tracking_decide: lambda must be positive");
    double shift = 0.0;
    for (std::size_t t = 0; t < models0.size(); ++t)
        shift += std::pow(arma::norm(models1[t].mean - models0[t].mean), 2) /
                 models0[t].cov_scalar;
    if (shift < kDegenerateShiftFloor)
        return std::log(lambda) <= 0.0; // identical hypotheses: constant decision
    return tracking_test_statistic(ys, models0, models1) >=
           tracking_threshold(models0, models1, lambda);
}

} // namespace lvs
