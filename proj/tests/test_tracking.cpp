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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lvs/errors.hpp"
#include "lvs/rng.hpp"
#include "lvs/tracking.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace lvs;
namespace ora = testsupport;

TEST_CASE("trajectory factories lay out the advertised geometry", "[tracking]") {
    ChannelParams chan;

    SECTION("radial approach") {
        const Trajectory traj = make_trajectory(make_polar(100.0, 0.3), 10.0, 0.5, 5, chan);
        REQUIRE(traj.slots.size() == 5);
        CHECK_THAT(traj.bearing, Catch::Matchers::WithinAbs(normalize_angle(0.3 + kPi), 1e-12));
        for (std::size_t t = 0; t < traj.slots.size(); ++t) {
            CHECK_THAT(traj.slots[t].claimed.d,
                       Catch::Matchers::WithinAbs(100.0 - 5.0 * static_cast<double>(t), 1e-12));
            CHECK(traj.slots[t].claimed.theta == traj.slots[0].claimed.theta);
        }
        CHECK_THROWS_AS(make_trajectory(make_polar(10.0, 0.0), 10.0, 1.0, 2, chan),
                        std::domain_error);
        CHECK_THROWS_AS(make_trajectory(make_polar(10.0, 0.0), -1.0, 1.0, 2, chan),
                        std::domain_error);
        CHECK_THROWS_AS(make_trajectory(make_polar(10.0, 0.0), 1.0, 0.0, 2, chan),
                        std::domain_error);
        CHECK_THROWS_AS(make_trajectory(make_polar(10.0, 0.0), 1.0, 1.0, 0, chan),
                        std::domain_error);
    }

    SECTION("arbitrary road") {
        const double bearing = 0.25 * kPi;
        const Trajectory traj =
            make_road_trajectory(make_polar(50.0, -0.5), bearing, 4.0, 0.5, 6, chan);
        REQUIRE(traj.slots.size() == 6);
        const Cartesian base = to_cartesian(traj.slots[0].claimed);
        for (std::size_t t = 1; t < traj.slots.size(); ++t) {
            const Cartesian p = to_cartesian(traj.slots[t].claimed);
            const double s = 2.0 * static_cast<double>(t); // speed * dt
            CHECK_THAT(p.x, Catch::Matchers::WithinAbs(base.x + s * std::cos(bearing), 1e-9));
            CHECK_THAT(p.y, Catch::Matchers::WithinAbs(base.y + s * std::sin(bearing), 1e-9));
        }
        // A road through the receiver is rejected.
        CHECK_THROWS_AS(make_road_trajectory(make_polar(5.0, kPi), 0.0, 2.0, 0.5, 12, chan),
                        std::domain_error);
    }
}

TEST_CASE("per-slot scenario swaps the claim and channel", "[tracking]") {
    const Scenario base = testsupport::roadside_scenario();
    Trajectory traj = testsupport::roadside_trajectory(base, 4);
    traj.slots[2].legit_chan.noise_var *= 3.0;

    const Scenario s2 = scenario_at(base, traj, 2);
    CHECK(s2.claimed.d == traj.slots[2].claimed.d);
    CHECK(s2.claimed.theta == traj.slots[2].claimed.theta);
    CHECK(s2.legit_chan.noise_var == traj.slots[2].legit_chan.noise_var);
    CHECK(s2.bs.n == base.bs.n);
    CHECK(s2.r_l == base.r_l);
    CHECK_THROWS_AS(scenario_at(base, traj, 4), std::out_of_range);
}

TEST_CASE("on-road placement honors every movement constraint", "[tracking]") {
    const Scenario scn = testsupport::roadside_scenario();
    const Trajectory traj = testsupport::roadside_trajectory(scn);
    const double r_u = testsupport::kRoadsideSlotRadius;
    const std::vector<PolarPoint> pos = attack_positions(traj, scn, r_u, AttackMode::on_road);
    REQUIRE(pos.size() == traj.slots.size());

    const Cartesian base = to_cartesian(traj.slots[0].claimed);
    const double ux = std::cos(traj.bearing);
    const double uy = std::sin(traj.bearing);
    for (std::size_t t = 0; t < pos.size(); ++t) {
        const Cartesian p = to_cartesian(pos[t]);
        // On the road line.
        CHECK(std::abs((p.x - base.x) * uy - (p.y - base.y) * ux) < 1e-6);
        // Outside the offset floor around the claim.
        CHECK(distance(p, to_cartesian(traj.slots[t].claimed)) >= scn.r_l * (1.0 - 1e-12));
        // Within the per-slot movement cap.
        if (t > 0)
            CHECK(distance(p, to_cartesian(pos[t - 1])) <= r_u * (1.0 + 1e-9));
    }

    // The first slot sits exactly on the offset floor, trailing the claim.
    CHECK_THAT(distance(pos[0], traj.slots[0].claimed), Catch::Matchers::WithinAbs(scn.r_l, 1e-6));

    // No on-road point beats the slot-1 pick on a dense parameter grid.
    const double achieved = correlation_mag_sq(traj.slots[0].claimed.theta, pos[0].theta, scn.bs);
    double best = 0.0;
    const Cartesian claim0 = to_cartesian(traj.slots[0].claimed);
    for (int i = 0; i <= 200000; ++i) {
        const double s = -1200.0 + 2400.0 * i / 200000.0;
        const Cartesian p{base.x + s * ux, base.y + s * uy};
        if (distance(p, claim0) < scn.r_l || !(std::hypot(p.x, p.y) > 1e-12))
            continue;
        best = std::max(best,
                        correlation_mag_sq(traj.slots[0].claimed.theta, std::atan2(p.y, p.x),
                                           scn.bs));
    }
    CHECK(achieved >= best - 1e-6);
}

TEST_CASE("window divergence is the sum of the per-slot floors", "[tracking]") {
    const Scenario scn = testsupport::roadside_scenario();
    const Trajectory traj = testsupport::roadside_trajectory(scn);
    const AttackTrack track =
        constrained_attack_track(traj, scn, testsupport::kRoadsideSlotRadius, AttackMode::on_road);
    REQUIRE(track.points.size() == traj.slots.size());

    double sum = 0.0;
    for (std::size_t t = 0; t < track.points.size(); ++t)
        sum += min_kl_at(scenario_at(scn, traj, t), track.points[t].plan.theta1_star);
    const double got = track_kl(track, traj, scn);
    CHECK_THAT(got, Catch::Matchers::WithinRel(sum, 1e-12));

    // Regression anchor for this window.
    CHECK_THAT(got, Catch::Matchers::WithinAbs(4.19385, 1e-4));

    // Each synthesized plan is complete and valid.
    for (const AttackTrackPoint& pt : track.points) {
        CHECK(pt.plan.p1_star > 0.0);
        CHECK(pt.plan.n1_star >= 2);
        CHECK_THAT(arma::norm(pt.plan.b1_star), Catch::Matchers::WithinAbs(1.0, 1e-12));
        CHECK(pt.plan.min_kl >= 0.0);
    }

    CHECK_THROWS_AS(track_kl(track, testsupport::roadside_trajectory(scn, 4), scn),
                    std::invalid_argument);
}

TEST_CASE("longer windows only help the verifier", "[tracking]") {
    const Scenario scn = testsupport::roadside_scenario();
    const Trajectory traj = testsupport::roadside_trajectory(scn);
    const AttackTrack track =
        constrained_attack_track(traj, scn, testsupport::kRoadsideSlotRadius, AttackMode::on_road);
    const double lambda = bayes_threshold(testsupport::kRoadsidePrior);

    double prefix = 0.0;
    double prev_err = 1.0;
    std::vector<double> errs;
    for (std::size_t t = 0; t < track.points.size(); ++t) {
        prefix += min_kl_at(scenario_at(scn, traj, t), track.points[t].plan.theta1_star);
        const double err =
            total_error(tracking_rates(prefix, lambda), testsupport::kRoadsidePrior);
        CHECK(err < prev_err);
        prev_err = err;
        errs.push_back(err);
    }
    REQUIRE(errs.size() == 10);
    CHECK_THAT(errs.front(), Catch::Matchers::WithinAbs(0.337127, 1e-4));
    CHECK_THAT(errs.back(), Catch::Matchers::WithinAbs(0.071850, 1e-4));
    const double ratio = errs.back() / errs.front();
    CHECK(ratio > 0.2);
    CHECK(ratio < 0.4);
}

TEST_CASE("multi-slot statistic, threshold, and decision", "[tracking]") {
    RngStream rng = stream_for(91, 0);
    auto random_model = [&](int n) {
        GaussianObsModel m;
        m.mean = arma::cx_vec(n);
        for (int i = 0; i < n; ++i)
            m.mean(i) = 2.0 * rng.cnormal();
        m.cov_scalar = 0.4 + 2.0 * rng.uniform();
        return m;
    };

    SECTION("a single slot reduces to the per-slot forms") {
        const GaussianObsModel m0 = random_model(3);
        GaussianObsModel m1 = random_model(3);
        m1.cov_scalar = m0.cov_scalar;
        arma::cx_vec y(3);
        for (int i = 0; i < 3; ++i)
            y(i) = 3.0 * rng.cnormal();
        CHECK(tracking_test_statistic({y}, {m0}, {m1}) == test_statistic(y, m0, m1));
        CHECK(tracking_threshold({m0}, {m1}, 1.7) == threshold_gamma(m0, m1, 1.7));
        CHECK(tracking_decide({y}, {m0}, {m1}, 1.7) == decide(y, m0, m1, 1.7));
    }

    SECTION("three slots add up") {
        std::vector<GaussianObsModel> m0s, m1s;
        std::vector<arma::cx_vec> ys;
        long double t_want = 0.0L;
        long double g_want = std::log(1.3L);
        for (int t = 0; t < 3; ++t) {
            const int n = 2 + t;
            m0s.push_back(random_model(n));
            GaussianObsModel m1 = random_model(n);
            m1.cov_scalar = m0s.back().cov_scalar;
            m1s.push_back(m1);
            arma::cx_vec y(n);
            for (int i = 0; i < n; ++i)
                y(i) = 3.0 * rng.cnormal();
            ys.push_back(y);
            for (int i = 0; i < n; ++i) {
                const ora::cld d(m1.mean(i).real() - m0s.back().mean(i).real(),
                                 m1.mean(i).imag() - m0s.back().mean(i).imag());
                const ora::cld yi(y(i).real(), y(i).imag());
                const ora::cld si(m1.mean(i).real() + m0s.back().mean(i).real(),
                                  m1.mean(i).imag() + m0s.back().mean(i).imag());
                t_want += 2.0L * (std::conj(d) * yi).real() / m0s.back().cov_scalar;
                g_want += (std::conj(d) * si).real() / m0s.back().cov_scalar;
            }
        }
        const double t_got = tracking_test_statistic(ys, m0s, m1s);
        const double g_got = tracking_threshold(m0s, m1s, 1.3);
        CHECK_THAT(t_got, Catch::Matchers::WithinAbs(static_cast<double>(t_want),
                                                     1e-9 * std::max(1.0, std::abs(t_got))));
        CHECK_THAT(g_got, Catch::Matchers::WithinAbs(static_cast<double>(g_want),
                                                     1e-9 * std::max(1.0, std::abs(g_got))));
        CHECK(tracking_decide(ys, m0s, m1s, 1.3) == (t_got >= g_got));
        CHECK_THROWS_AS(tracking_test_statistic({ys[0]}, m0s, m1s), std::invalid_argument);
    }

    SECTION("a perfectly imitated window gives a constant decision") {
        std::vector<GaussianObsModel> m0s{random_model(2), random_model(3)};
        const std::vector<GaussianObsModel> m1s = m0s;
        std::vector<arma::cx_vec> ys;
        for (const auto& m : m0s) {
            arma::cx_vec y(m.dim());
            for (int i = 0; i < m.dim(); ++i)
                y(i) = 5.0 * rng.cnormal();
            ys.push_back(y);
        }
        CHECK(tracking_decide(ys, m0s, m1s, 0.8));
        CHECK(tracking_decide(ys, m0s, m1s, 1.0));
        CHECK_FALSE(tracking_decide(ys, m0s, m1s, 1.2));
    }
}

TEST_CASE("closed-form window rates follow the divergence sum", "[tracking]") {
    for (double kl : {0.5, 4.19385})
        for (double lambda : {1.0, 1.5}) {
            const RatePair got = tracking_rates(kl, lambda);
            const RatePair want = rates_from_kl(kl, lambda);
            CHECK(got.false_positive == want.false_positive);
            CHECK(got.detection == want.detection);
        }
    // Regression anchor: the ten-slot window above at the prior-matched
    // threshold.
    const RatePair r = tracking_rates(4.19385, 1.5);
    CHECK_THAT(r.false_positive, Catch::Matchers::WithinAbs(0.05613, 1e-4));
    CHECK_THAT(r.detection, Catch::Matchers::WithinAbs(0.90458, 1e-3));
}

TEST_CASE("free placement is at least as strong as on-road placement", "[tracking]") {
    const Scenario scn = testsupport::roadside_scenario();
    const Trajectory traj = testsupport::roadside_trajectory(scn);
    const double r_u = testsupport::kRoadsideSlotRadius;

    const std::vector<PolarPoint> road = attack_positions(traj, scn, r_u, AttackMode::on_road);
    const std::vector<PolarPoint> free = attack_positions(traj, scn, r_u, AttackMode::free_roam);
    REQUIRE(free.size() == road.size());

    double kl_road = 0.0, kl_free = 0.0;
    for (std::size_t t = 0; t < road.size(); ++t) {
        const Scenario scn_t = scenario_at(scn, traj, t);
        kl_road += min_kl_at(scn_t, road[t].theta);
        kl_free += min_kl_at(scn_t, free[t].theta);
        // Free placement still honors the standoff and movement limits.
        CHECK(distance(free[t], traj.slots[t].claimed) >= scn.r_l * (1.0 - 1e-12));
        if (t > 0)
            CHECK(distance(free[t], free[t - 1]) <= r_u * (1.0 + 1e-9));
    }
    CHECK(kl_free <= kl_road + 1e-9);
    // An unconstrained first slot starts at the best possible azimuth.
    CHECK(min_kl_at(scenario_at(scn, traj, 0), free[0].theta) <= 1e-9);
}

TEST_CASE("impossible placements are reported, and the tolerant variant recovers",
          "[tracking]") {
    Scenario scn = testsupport::roadside_scenario();
    const Trajectory traj = testsupport::roadside_trajectory(scn);

    SECTION("every azimuth forbidden") {
        scn.forbidden_angles.push_back({-kPi, kPi});
        CHECK_THROWS_AS(
            attack_positions(traj, scn, testsupport::kRoadsideSlotRadius, AttackMode::on_road),
            InfeasibleTrack);
    }

    SECTION("a frozen attacker overrun by the claim") {
        // The claim drives outward along its own azimuth straight at the
        // parked attacker; with no movement allowance the standoff fails.
        Scenario out = testsupport::roadside_scenario();
        out.r_l = 10.0;
        const Trajectory chase =
            make_road_trajectory(out.claimed, out.claimed.theta, 50.0, 0.1, 5, out.legit_chan);
        CHECK_THROWS_AS(attack_positions(chase, out, 0.0, AttackMode::free_roam),
                        InfeasibleTrack);

        // The tolerant rebuild re-anchors instead of giving up.
        const std::vector<PolarPoint> pos = resilient_attack_positions(
            chase, out, 0.0, AttackMode::free_roam, Cartesian{}, 0.0);
        REQUIRE(pos.size() == chase.slots.size());
        for (std::size_t t = 0; t < pos.size(); ++t)
            CHECK(distance(pos[t], chase.slots[t].claimed) >= out.r_l * (1.0 - 1e-12));
    }

    SECTION("the tolerant variant reproduces feasible placements") {
        const std::vector<PolarPoint> strict = attack_positions(
            traj, scn, testsupport::kRoadsideSlotRadius, AttackMode::on_road);
        const std::vector<PolarPoint> tolerant = resilient_attack_positions(
            traj, scn, testsupport::kRoadsideSlotRadius, AttackMode::on_road,
            to_cartesian(traj.slots[0].claimed), traj.bearing);
        REQUIRE(strict.size() == tolerant.size());
        for (std::size_t t = 0; t < strict.size(); ++t) {
            CHECK(strict[t].d == tolerant[t].d);
            CHECK(strict[t].theta == tolerant[t].theta);
        }
    }
}
