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
#include <vector>

#include "lvs/attack.hpp"
#include "lvs/channel.hpp"
#include "lvs/rng.hpp"
#include "support/oracles.hpp"
#include "support/scenarios.hpp"

using namespace lvs;
namespace ora = testsupport;

TEST_CASE("rank-one specular matrix at broadside-to-endfire", "[channel]") {
    // theta = 0, psi = 0, tau = pi, two elements each: [[1, -1], [-1, 1]].
    const ArrayGeometry bs = ArrayGeometry::ula_from_tau(2, kPi);
    const ArrayGeometry veh = ArrayGeometry::ula_from_tau(2, kPi);
    const arma::cx_mat h = los_matrix(0.0, steering_tx_ula(0.0, veh), bs);
    REQUIRE(h.n_rows == 2);
    REQUIRE(h.n_cols == 2);
    const double want[2][2] = {{1.0, -1.0}, {-1.0, 1.0}};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            CHECK_THAT(h(r, c).real(), Catch::Matchers::WithinAbs(want[r][c], 1e-12));
            CHECK_THAT(h(r, c).imag(), Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
}

TEST_CASE("specular matrix equals the outer product", "[channel]") {
    RngStream rng = stream_for(77, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const int nb = 2 + static_cast<int>(rng.uniform_int(0, 5));
        const int nk = 2 + static_cast<int>(rng.uniform_int(0, 5));
        const double tau = 0.3 + 3.0 * rng.uniform();
        const double theta = normalize_angle(6.0 * (rng.uniform() - 0.5));
        const double psi = normalize_angle(6.0 * (rng.uniform() - 0.5));
        const ArrayGeometry bs = ArrayGeometry::ula_from_tau(nb, tau);
        const ArrayGeometry veh = ArrayGeometry::ula_from_tau(nk, tau);
        const arma::cx_mat h = los_matrix(theta, steering_tx_ula(psi, veh), bs);
        const auto r = ora::rx_phases(nb, tau, theta);
        const auto t = ora::tx_line_phases(nk, tau, psi);
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nk; ++j) {
                const ora::cld want =
                    r[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)];
                CHECK(std::abs(h(i, j) - std::complex<double>(static_cast<double>(want.real()),
                                                              static_cast<double>(want.imag()))) <
                      1e-12);
            }
    }
}

TEST_CASE("channel draws have the advertised first two moments", "[channel]") {
    const ArrayGeometry bs = ArrayGeometry::ula_from_tau(2, kPi);
    const ArrayGeometry veh = ArrayGeometry::ula_from_tau(2, kPi);
    const arma::cx_mat los = los_matrix(0.3, steering_tx_ula(0.7, veh), bs);
    const double k = 1.0;
    const std::size_t draws = 250000; // one million matrix entries

    arma::cx_mat sum(2, 2, arma::fill::zeros);
    arma::mat sum_sq_dev(2, 2, arma::fill::zeros);
    RngStream rng = stream_for(77, 1);
    const arma::cx_mat expected_mean = std::sqrt(k / (1.0 + k)) * los;
    for (std::size_t i = 0; i < draws; ++i) {
        const arma::cx_mat h = sample_channel(k, los, rng);
        sum += h;
        const arma::cx_mat dev = h - expected_mean;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                sum_sq_dev(r, c) += std::norm(dev(r, c));
    }
    const double n = static_cast<double>(draws);
    const double axis_se = std::sqrt(0.25 / n);   // per-axis variance is 1/2 / 2
    const double var_se = 0.5 / std::sqrt(n);     // complex variance estimator
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const std::complex<double> mean_hat = sum(r, c) / n;
            CHECK(std::abs(mean_hat.real() - expected_mean(r, c).real()) < 3.0 * axis_se);
            CHECK(std::abs(mean_hat.imag() - expected_mean(r, c).imag()) < 3.0 * axis_se);
            const double var_hat = sum_sq_dev(r, c) / n;
            CHECK(std::abs(var_hat - 0.5) < 3.0 * var_se);
        }
}

TEST_CASE("suppressing the diffuse part returns the specular matrix", "[channel]") {
    const ArrayGeometry bs = ArrayGeometry::ula_from_tau(3, kPi);
    const ArrayGeometry veh = ArrayGeometry::ula_from_tau(2, kPi);
    const arma::cx_mat los = los_matrix(1.1, steering_tx_ula(0.4, veh), bs);
    RngStream rng = stream_for(77, 2);
    const arma::cx_mat h = sample_channel(0.0, los, rng, /*pure_los=*/true);
    CHECK(arma::approx_equal(h, los, "absdiff", 0.0));
    CHECK_THROWS_AS(sample_channel(-0.5, los, rng), std::domain_error);
}

TEST_CASE("snapshot mean follows the scaled matrix-vector product", "[channel]") {
    RngStream rng = stream_for(77, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int nb = 2 + static_cast<int>(rng.uniform_int(0, 4));
        const int nk = 2 + static_cast<int>(rng.uniform_int(0, 4));
        const double tau = 0.4 + 2.5 * rng.uniform();
        const ArrayGeometry bs = ArrayGeometry::ula_from_tau(nb, tau);
        const ArrayGeometry veh = ArrayGeometry::ula_from_tau(nk, tau);
        const double theta = normalize_angle(6.0 * (rng.uniform() - 0.5));
        const double psi = normalize_angle(6.0 * (rng.uniform() - 0.5));
        const arma::cx_mat los = los_matrix(theta, steering_tx_ula(psi, veh), bs);

        ChannelParams chan;
        chan.k_factor = 0.1 + 5.0 * rng.uniform();
        chan.noise_var = 1.0;
        chan.tx_power = 0.5 + 10.0 * rng.uniform();
        chan.path.carrier_hz = 5.9e9;
        const double d = 20.0 + 200.0 * rng.uniform();

        arma::cx_vec b(nk);
        for (int i = 0; i < nk; ++i)
            b(i) = rng.cnormal();
        b /= arma::norm(b);

        const arma::cx_vec m = mean_vector(chan, d, los, b);
        // Scalar-loop oracle.
        const long double scale =
            std::sqrt(static_cast<long double>(chan.tx_power) *
                      ora::path_gain(5.9e9L, 3.0e8L, 1.0L, 2.0L, d) *
                      (chan.k_factor / (1.0L + chan.k_factor)));
        for (int i = 0; i < nb; ++i) {
            ora::cld acc{0.0L, 0.0L};
            for (int j = 0; j < nk; ++j)
                acc += ora::cld(los(i, j).real(), los(i, j).imag()) *
                       ora::cld(b(j).real(), b(j).imag());
            acc *= scale;
            CHECK(std::abs(m(i) - std::complex<double>(static_cast<double>(acc.real()),
                                                       static_cast<double>(acc.imag()))) <
                  1e-12 * std::max(1.0, std::abs(m(i))));
        }

        // Non-unit beamformers are rejected.
        CHECK_THROWS_AS(mean_vector(chan, d, los, 2.0 * b), std::invalid_argument);
    }
}

TEST_CASE("snapshot covariance splits diffuse power and noise", "[channel]") {
    ChannelParams chan;
    chan.k_factor = 3.0;
    chan.noise_var = 0.7;
    chan.tx_power = 50.0;
    chan.path.carrier_hz = 5.9e9;
    chan.path.exponent = 2.5;
    const double d = 120.0;
    const double got = cov_scalar(chan, d);
    const long double g = ora::path_gain(5.9e9L, 3.0e8L, 1.0L, 2.5L, d);
    const long double want = 50.0L * g / 4.0L + 0.7L;
    CHECK_THAT(got, Catch::Matchers::WithinRel(static_cast<double>(want), 1e-12));

    chan.pure_los = true;
    CHECK(cov_scalar(chan, d) == 0.7);
}

TEST_CASE("observation draws have the advertised moments", "[channel]") {
    GaussianObsModel model;
    model.mean = arma::cx_vec(1, arma::fill::zeros);
    model.cov_scalar = 1.0;
    RngStream rng = stream_for(77, 4);
    const std::size_t n = 1000000;
    double sum_re = 0.0, sum_im = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const ObservationSnapshot snap = sample_observation(model, rng);
        sum_re += snap.y(0).real();
        sum_im += snap.y(0).imag();
        sum_sq += std::norm(snap.y(0));
    }
    const double nn = static_cast<double>(n);
    const double axis_se = std::sqrt(0.5 / nn);
    CHECK(std::abs(sum_re / nn) < 3.0 * axis_se);
    CHECK(std::abs(sum_im / nn) < 3.0 * axis_se);
    CHECK(std::abs(sum_sq / nn - 1.0) < 3.0 / std::sqrt(nn));
}

TEST_CASE("two sampling routes give the same snapshot distribution", "[channel]") {
    // Route A: explicit channel draw H, then y = sqrt(p g) H b + noise.
    // Route B: direct draw from the Gaussian snapshot model.
    // Their first two moments must agree, and the first component must pass a
    // distribution test against the model.
    const Scenario scn = testsupport::reference_scenario(5.0);
    const ArrayGeometry& bs = scn.bs;
    const ArrayGeometry& veh = scn.veh_legit;
    const double theta = scn.claimed.theta;
    const arma::cx_mat los = los_matrix(theta, steering_tx_ula(scn.psi_legit, veh), bs);
    // Matched-filter beamformer: conjugate transposed steering over sqrt(N0).
    arma::cx_vec b = arma::conv_to<arma::cx_vec>::from(steering_tx_ula(scn.psi_legit, veh).t());
    b /= arma::norm(b);

    const GaussianObsModel model = legit_model(scn);
    const double d = scn.claimed.d;
    const double p = scn.legit_chan.tx_power;
    const double g = path_loss(d, scn.legit_chan.path);
    const double noise_sd = std::sqrt(scn.legit_chan.noise_var);

    const std::size_t n = 200000;
    RngStream rng_a = stream_for(77, 5);
    RngStream rng_b = stream_for(77, 6);
    const int nb = bs.n;
    arma::cx_vec sum_a(nb, arma::fill::zeros), sum_b(nb, arma::fill::zeros);
    double sq_a = 0.0, sq_b = 0.0;
    std::vector<double> first_re;
    first_re.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const arma::cx_mat h = sample_channel(scn.legit_chan.k_factor, los, rng_a);
        arma::cx_vec y = std::sqrt(p * g) * (h * b);
        for (int r = 0; r < nb; ++r)
            y(r) += noise_sd * rng_a.cnormal();
        sum_a += y;
        sq_a += std::norm(y(0) - model.mean(0));
        first_re.push_back(y(0).real());

        const ObservationSnapshot snap = sample_observation(model, rng_b);
        sum_b += snap.y;
        sq_b += std::norm(snap.y(0) - model.mean(0));
    }
    const double nn = static_cast<double>(n);
    const double axis_se = std::sqrt(0.5 * model.cov_scalar / nn);
    for (int r = 0; r < nb; ++r) {
        CHECK(std::abs(sum_a(r) / nn - model.mean(r)) < 4.0 * axis_se * std::sqrt(2.0));
        CHECK(std::abs(sum_b(r) / nn - model.mean(r)) < 4.0 * axis_se * std::sqrt(2.0));
    }
    const double var_se = model.cov_scalar / std::sqrt(nn);
    CHECK(std::abs(sq_a / nn - model.cov_scalar) < 3.0 * var_se);
    CHECK(std::abs(sq_b / nn - model.cov_scalar) < 3.0 * var_se);

    // Distribution check on Re(y[0]) for the explicit route: Gaussian with
    // mean Re(m[0]) and variance cov/2.
    const std::size_t ks_n = 10000;
    std::vector<double> sample(first_re.begin(), first_re.begin() + ks_n);
    const double mu = model.mean(0).real();
    const double sd = std::sqrt(0.5 * model.cov_scalar);
    const double stat = ora::ks_statistic(std::move(sample), [&](double x) {
        return 1.0 - static_cast<double>(ora::q_tail((x - mu) / sd));
    });
    CHECK(stat < ora::ks_critical_5pct(ks_n));
}

TEST_CASE("log density integrates to one and matches the quadratic form", "[channel]") {
    GaussianObsModel model;
    model.mean = arma::cx_vec{std::complex<double>(0.4, -0.3)};
    model.cov_scalar = 0.8;

    // 2-D Simpson integration of exp(log_likelihood) over a wide box.
    const int steps = 400; // even
    const double lim = 6.0 * std::sqrt(0.5 * model.cov_scalar);
    const double h = 2.0 * lim / steps;
    auto weight = [&](int i) { return i == 0 || i == steps ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0); };
    long double total = 0.0L;
    for (int i = 0; i <= steps; ++i) {
        const double re = model.mean(0).real() - lim + h * i;
        long double row = 0.0L;
        for (int j = 0; j <= steps; ++j) {
            const double im = model.mean(0).imag() - lim + h * j;
            const arma::cx_vec y{std::complex<double>(re, im)};
            row += weight(j) * std::exp(static_cast<long double>(log_likelihood(y, model)));
        }
        total += weight(i) * row;
    }
    total *= static_cast<long double>(h) * h / 9.0L;
    CHECK(std::abs(static_cast<double>(total) - 1.0) < 1e-4);

    // Direct quadratic-form oracle on random points.
    RngStream rng = stream_for(77, 7);
    for (int i = 0; i < 50; ++i) {
        const arma::cx_vec y{std::complex<double>(4.0 * (rng.uniform() - 0.5),
                                                  4.0 * (rng.uniform() - 0.5))};
        const long double quad = std::norm(ora::cld(y(0).real(), y(0).imag()) -
                                           ora::cld(model.mean(0).real(), model.mean(0).imag()));
        const long double want =
            -std::log(ora::kPiL * 0.8L) - quad / 0.8L;
        CHECK_THAT(log_likelihood(y, model),
                   Catch::Matchers::WithinAbs(static_cast<double>(want), 1e-12));
    }
}
