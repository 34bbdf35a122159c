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

#include "lvs/geometry.hpp"

#include <stdexcept>

namespace lvs {

// ---------- positions ----------

PolarPoint make_polar(double d, double theta) {
    if (!(d > 0.0))
        throw std::domain_error("make_polar: range must be positive");
    return {d, normalize_angle(theta)};
}

Cartesian to_cartesian(const PolarPoint& p) {
    return {p.d * std::cos(p.theta), p.d * std::sin(p.theta)};
}

PolarPoint to_polar(const Cartesian& c) {
    const double d = std::hypot(c.x, c.y);
    if (!(d > 0.0))
        throw std::domain_error("to_polar: point coincides with the origin");
    return {d, std::atan2(c.y, c.x)};
}

double distance(const PolarPoint& a, const PolarPoint& b) {
    return distance(to_cartesian(a), to_cartesian(b));
}

double distance(const Cartesian& a, const Cartesian& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// ---------- antenna arrays ----------

namespace {

void check_array(int n, double length_m, double carrier_hz, double light_speed) {
    if (n < 1)
        throw std::invalid_argument("ArrayGeometry: antenna count must be >= 1");
    if (!(length_m > 0.0))
        throw std::invalid_argument("ArrayGeometry: spacing/radius must be positive");
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("ArrayGeometry: carrier frequency must be positive");
    if (!(light_speed > 0.0))
        throw std::invalid_argument("ArrayGeometry: propagation speed must be positive");
}

} // namespace

ArrayGeometry ArrayGeometry::ula(int n, double spacing_m, double carrier_hz, double light_speed) {
    check_array(n, spacing_m, carrier_hz, light_speed);
    const double tau = 2.0 * kPi * carrier_hz * spacing_m / light_speed;
    return {ArrayKind::ula, n, spacing_m, carrier_hz, tau};
}

ArrayGeometry ArrayGeometry::uca(int n, double radius_m, double carrier_hz, double light_speed) {
    check_array(n, radius_m, carrier_hz, light_speed);
    const double tau = 2.0 * kPi * carrier_hz * radius_m / light_speed;
    return {ArrayKind::uca, n, radius_m, carrier_hz, tau};
}

ArrayGeometry ArrayGeometry::ula_from_tau(int n, double tau, double carrier_hz, double light_speed) {
    if (!(tau > 0.0))
        throw std::invalid_argument("ArrayGeometry: phase constant must be positive");
    const double spacing = tau * light_speed / (2.0 * kPi * carrier_hz);
    check_array(n, spacing, carrier_hz, light_speed);
    return {ArrayKind::ula, n, spacing, carrier_hz, tau};
}

ArrayGeometry ArrayGeometry::uca_from_tau(int n, double tau, double carrier_hz, double light_speed) {
    ArrayGeometry g = ula_from_tau(n, tau, carrier_hz, light_speed);
    g.kind = ArrayKind::uca;
    return g;
}

arma::cx_vec steering_rx(double theta, const ArrayGeometry& bs) {
    if (bs.kind != ArrayKind::ula)
        throw std::invalid_argument("steering_rx: base-station array must be a ULA");
    arma::cx_vec r(bs.n);
    const double step = bs.tau * std::cos(theta);
    for (int i = 0; i < bs.n; ++i)
        r(i) = std::polar(1.0, i * step);
    return r;
}

arma::cx_rowvec steering_tx_ula(double psi, const ArrayGeometry& veh) {
    if (veh.kind != ArrayKind::ula)
        throw std::invalid_argument("steering_tx_ula: array is not a ULA");
    arma::cx_rowvec t(veh.n);
    const double step = veh.tau * std::cos(psi);
    for (int i = 0; i < veh.n; ++i)
        t(i) = std::polar(1.0, -i * step);
    return t;
}

arma::cx_rowvec steering_tx_uca(double phi1, const ArrayGeometry& veh) {
    if (veh.kind != ArrayKind::uca)
        throw std::invalid_argument("steering_tx_uca: array is not a UCA");
    arma::cx_rowvec t(veh.n);
    for (int m = 0; m < veh.n; ++m) {
        const double phi_m = 2.0 * kPi * m / veh.n + phi1;
        t(m) = std::polar(1.0, -veh.tau * std::cos(phi_m));
    }
    return t;
}

double path_loss(double d, const PathLossParams& p) {
    if (!(d > 0.0))
        throw std::domain_error("path_loss: distance must be positive");
    if (!(p.ref_distance > 0.0) || !(p.exponent > 0.0) || !(p.carrier_hz > 0.0) || !(p.light_speed > 0.0))
        throw std::invalid_argument("path_loss: parameters must be positive");
    const double ref = p.light_speed / (4.0 * kPi * p.carrier_hz * p.ref_distance);
    return ref * ref * std::pow(p.ref_distance / d, p.exponent);
}

double correlation_mag_sq(double theta0, double theta1, const ArrayGeometry& bs) {
    if (bs.kind != ArrayKind::ula)
        throw std::invalid_argument("correlation_mag_sq: base-station array must be a ULA");
    const double n = static_cast<double>(bs.n);
    const double c0 = std::cos(theta0);
    const double c1 = std::cos(theta1);
    if (c0 == c1)
        return n * n;
    const double nu = bs.tau * (c0 - c1);
    const double den = std::sin(0.5 * nu);
    // Removable singularity of the Dirichlet kernel: the limit is n^2.
    if (std::abs(den) < 1e-12)
        return n * n;
    const double ratio = std::sin(0.5 * n * nu) / den;
    return ratio * ratio;
}

} // namespace lvs
