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
#include <complex>

#include "lvs/geometry.hpp"
#include "lvs/rng.hpp"
#include "support/oracles.hpp"

using namespace lvs;
namespace ora = testsupport;

TEST_CASE("decibel helpers round-trip", "[geometry]") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK_THAT(db_to_linear(1.0), Catch::Matchers::WithinRel(1.2589254117941673, 1e-15));
    CHECK_THAT(db_to_linear(-75.0), Catch::Matchers::WithinRel(std::pow(10.0, -7.5), 1e-15));
    for (double db : {-30.0, -3.0, 0.0, 0.5, 10.0, 25.0})
        CHECK_THAT(linear_to_db(db_to_linear(db)), Catch::Matchers::WithinAbs(db, 1e-12));
}

TEST_CASE("angles wrap into the half-open turn", "[geometry]") {
    CHECK(normalize_angle(0.0) == 0.0);
    CHECK(normalize_angle(kPi) == kPi);
    CHECK(normalize_angle(-kPi) == kPi);
    // 3 pi is the same direction as pi (either boundary representation).
    CHECK(std::abs(std::abs(normalize_angle(3.0 * kPi)) - kPi) < 1e-12);
    CHECK_THAT(normalize_angle(-0.5 * kPi), Catch::Matchers::WithinAbs(-0.5 * kPi, 1e-15));
    RngStream rng = stream_for(1234, 0);
    for (int i = 0; i < 200; ++i) {
        const double a = 50.0 * (rng.uniform() - 0.5);
        const double w = normalize_angle(a);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        // Same direction on the unit circle.
        CHECK_THAT(std::cos(w), Catch::Matchers::WithinAbs(std::cos(a), 1e-9));
        CHECK_THAT(std::sin(w), Catch::Matchers::WithinAbs(std::sin(a), 1e-9));
    }
}

TEST_CASE("polar/cartesian conversions agree with plane geometry", "[geometry]") {
    const PolarPoint p = make_polar(10.0 * std::sqrt(2.0), 0.25 * kPi);
    const Cartesian c = to_cartesian(p);
    CHECK_THAT(c.x, Catch::Matchers::WithinAbs(10.0, 1e-9));
    CHECK_THAT(c.y, Catch::Matchers::WithinAbs(10.0, 1e-9));

    RngStream rng = stream_for(1234, 1);
    for (int i = 0; i < 200; ++i) {
        const PolarPoint a = make_polar(0.1 + 500.0 * rng.uniform(),
                                        normalize_angle(8.0 * (rng.uniform() - 0.5)));
        const PolarPoint b = make_polar(0.1 + 500.0 * rng.uniform(),
                                        normalize_angle(8.0 * (rng.uniform() - 0.5)));
        const PolarPoint back = to_polar(to_cartesian(a));
        CHECK_THAT(back.d, Catch::Matchers::WithinRel(a.d, 1e-12));
        CHECK_THAT(back.theta, Catch::Matchers::WithinAbs(a.theta, 1e-12));
        // The two distance overloads describe the same metric.
        CHECK_THAT(distance(a, b),
                   Catch::Matchers::WithinRel(distance(to_cartesian(a), to_cartesian(b)),
                                              1e-12) ||
                       Catch::Matchers::WithinAbs(0.0, 1e-12));
        // Law of cosines as an independent oracle.
        const double law = std::sqrt(std::max(
            0.0, a.d * a.d + b.d * b.d - 2.0 * a.d * b.d * std::cos(a.theta - b.theta)));
        CHECK_THAT(distance(a, b), Catch::Matchers::WithinAbs(law, 1e-7));
    }
    CHECK(distance(p, p) == 0.0);
    CHECK_THROWS_AS(make_polar(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(make_polar(-1.0, 0.0), std::domain_error);
}

TEST_CASE("array factories derive the phase constant", "[geometry]") {
    const double fc = 5.9e9;
    const double half = 0.5 * kDefaultLightSpeed / fc;
    const ArrayGeometry ula = ArrayGeometry::ula(4, half, fc);
    CHECK(ula.kind == ArrayKind::ula);
    CHECK(ula.n == 4);
    CHECK_THAT(ula.tau, Catch::Matchers::WithinRel(kPi, 1e-12));
    const ArrayGeometry from_tau = ArrayGeometry::ula_from_tau(4, kPi, fc);
    CHECK_THAT(from_tau.spacing, Catch::Matchers::WithinRel(half, 1e-12));
    const ArrayGeometry uca = ArrayGeometry::uca(6, 2.0 * half, fc);
    CHECK(uca.kind == ArrayKind::uca);
    CHECK_THAT(uca.tau, Catch::Matchers::WithinRel(2.0 * kPi, 1e-12));
}

TEST_CASE("receive steering matches the scalar loop", "[geometry]") {
    RngStream rng = stream_for(1234, 2);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_int(0, 14));
        const double tau = 0.2 + 3.0 * rng.uniform();
        const double theta = normalize_angle(8.0 * (rng.uniform() - 0.5));
        const ArrayGeometry bs = ArrayGeometry::ula_from_tau(n, tau);
        const arma::cx_vec r = steering_rx(theta, bs);
        REQUIRE(static_cast<int>(r.n_elem) == n);
        const auto expected = ora::rx_phases(n, tau, theta);
        for (int i = 0; i < n; ++i) {
            CHECK_THAT(r(static_cast<arma::uword>(i)).real(),
                       Catch::Matchers::WithinAbs(
                           static_cast<double>(expected[static_cast<std::size_t>(i)].real()),
                           1e-13));
            CHECK_THAT(r(static_cast<arma::uword>(i)).imag(),
                       Catch::Matchers::WithinAbs(
                           static_cast<double>(expected[static_cast<std::size_t>(i)].imag()),
                           1e-13));
        }
        CHECK_THAT(std::norm(arma::norm(r)), Catch::Matchers::WithinRel(double(n), 1e-12));
    }
}

TEST_CASE("transmit line-array steering at a quarter turn", "[geometry]") {
    // psi = pi/4, n = 4, tau = pi: element i must be exp(-j i pi sqrt(2)/2).
    const ArrayGeometry veh = ArrayGeometry::ula_from_tau(4, kPi);
    const arma::cx_rowvec t = steering_tx_ula(0.25 * kPi, veh);
    REQUIRE(t.n_elem == 4);
    for (int i = 0; i < 4; ++i) {
        const long double phase = -static_cast<long double>(i) * ora::kPiL *
                                  std::sqrt(2.0L) / 2.0L;
        const ora::cld want = std::polar<long double>(1.0L, phase);
        CHECK_THAT(t(static_cast<arma::uword>(i)).real(),
                   Catch::Matchers::WithinAbs(static_cast<double>(want.real()), 1e-13));
        CHECK_THAT(t(static_cast<arma::uword>(i)).imag(),
                   Catch::Matchers::WithinAbs(static_cast<double>(want.imag()), 1e-13));
    }
}

TEST_CASE("transmit ring-array steering places phases on the circle", "[geometry]") {
    // n = 4, phi1 = 0, tau = pi: elements exp(-j pi cos(0, pi/2, pi, 3pi/2)).
    const ArrayGeometry veh = ArrayGeometry::uca_from_tau(4, kPi);
    const arma::cx_rowvec t = steering_tx_uca(0.0, veh);
    REQUIRE(t.n_elem == 4);
    const double want_re[4] = {-1.0, 1.0, -1.0, 1.0};
    for (int i = 0; i < 4; ++i) {
        CHECK_THAT(t(static_cast<arma::uword>(i)).real(),
                   Catch::Matchers::WithinAbs(want_re[i], 1e-12));
        CHECK_THAT(t(static_cast<arma::uword>(i)).imag(),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
    // General agreement with the scalar loop.
    RngStream rng = stream_for(1234, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform_int(0, 9));
        const double tau = 0.2 + 4.0 * rng.uniform();
        const double phi1 = normalize_angle(8.0 * (rng.uniform() - 0.5));
        const ArrayGeometry geom = ArrayGeometry::uca_from_tau(n, tau);
        const arma::cx_rowvec row = steering_tx_uca(phi1, geom);
        const auto expected = ora::tx_ring_phases(n, tau, 0.0L, phi1);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(row(static_cast<arma::uword>(i)) -
                           std::complex<double>(
                               static_cast<double>(expected[static_cast<std::size_t>(i)].real()),
                               static_cast<double>(
                                   expected[static_cast<std::size_t>(i)].imag()))) < 1e-12);
    }
}

TEST_CASE("path loss follows the reference gain and power law", "[geometry]") {
    PathLossParams p;
    p.carrier_hz = 5.9e9;
    p.ref_distance = 1.0;
    p.exponent = 3.0;
    const double got = path_loss(100.0, p);
    const long double want = ora::path_gain(5.9e9L, 3.0e8L, 1.0L, 3.0L, 100.0L);
    CHECK_THAT(got, Catch::Matchers::WithinRel(static_cast<double>(want), 1e-12));

    // At the reference distance only the free-space factor remains.
    const double at_ref = path_loss(1.0, p);
    const double free_space = std::pow(3.0e8 / (4.0 * kPi * 5.9e9), 2);
    CHECK_THAT(at_ref, Catch::Matchers::WithinRel(free_space, 1e-12));

    // Strictly decreasing in distance.
    double prev = path_loss(0.5, p);
    for (double d : {1.0, 2.0, 10.0, 50.0, 400.0}) {
        const double g = path_loss(d, p);
        CHECK(g < prev);
        prev = g;
    }
    CHECK_THROWS_AS(path_loss(0.0, p), std::domain_error);
    CHECK_THROWS_AS(path_loss(-2.0, p), std::domain_error);
}

TEST_CASE("steering correlation matches the direct inner product", "[geometry]") {
    const double theta0 = 0.5 * kPi;
    for (int nb : {2, 4, 8}) {
        const ArrayGeometry bs = ArrayGeometry::ula_from_tau(nb, kPi);
        const int points = 2000;
        for (int i = 0; i < points; ++i) {
            const double theta1 = -kPi + (2.0 * kPi) * (i + 1) / points;
            const double got = correlation_mag_sq(theta0, theta1, bs);
            const long double want = ora::corr_direct(nb, ora::kPiL, theta0, theta1);
            const double scale = static_cast<double>(nb) * nb;
            CHECK(std::abs(got - static_cast<double>(want)) <=
                  1e-9 * std::max(scale, std::abs(static_cast<double>(want))));
        }
        // Exact peak where the cosines coincide.
        CHECK(correlation_mag_sq(theta0, theta0, bs) == static_cast<double>(nb * nb));
        CHECK(correlation_mag_sq(theta0, -theta0, bs) == static_cast<double>(nb * nb));
    }
}

TEST_CASE("correlation peak sharpens with array size", "[geometry]") {
    const double theta0 = 0.5 * kPi;
    const double theta1 = kPi / 3.0;
    double prev_gap = -1.0;
    for (int nb : {2, 4, 8}) {
        const ArrayGeometry bs = ArrayGeometry::ula_from_tau(nb, kPi);
        const double gap = nb - correlation_mag_sq(theta0, theta1, bs) / nb;
        CHECK(gap > prev_gap);
        prev_gap = gap;
    }
}
