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

#include <armadillo>
#include <cmath>

namespace lvs {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Propagation speed used for the phase and path-loss constants.  The round
// figure is the conventional simulation value; pass the CODATA value
// 2.99792458e8 explicitly where physical accuracy matters.
inline constexpr double kDefaultLightSpeed = 3.0e8;

// ---------- unit helpers ----------

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

// Wrap an angle to (-pi, pi].
inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi)
        a += 2.0 * kPi;
    else if (a > kPi)
        a -= 2.0 * kPi;
    return a;
}

// ---------- positions ----------

// Planar position in polar form, base station at the origin: range d in
// meters (> 0), azimuth theta in radians within (-pi, pi].
struct PolarPoint {
    double d = 1.0;
    double theta = 0.0;
};

struct Cartesian {
    double x = 0.0;
    double y = 0.0;
};

PolarPoint make_polar(double d, double theta); // validates and wraps theta
Cartesian to_cartesian(const PolarPoint& p);
PolarPoint to_polar(const Cartesian& c);
double distance(const PolarPoint& a, const PolarPoint& b); // Euclidean, meters
double distance(const Cartesian& a, const Cartesian& b);   // Euclidean, meters

// ---------- antenna arrays ----------

enum class ArrayKind { ula, uca };

// Antenna array description.  `tau` is the inter-element phase constant:
// for a ULA tau = 2*pi*f*spacing/c, for a UCA tau = 2*pi*f*radius/c.
struct ArrayGeometry {
    ArrayKind kind = ArrayKind::ula;
    int n = 1;            // antenna count
    double spacing = 0.0; // element spacing (ULA) or circle radius (UCA), meters
    double carrier_hz = 5.9e9;
    double tau = kPi;     // derived phase constant, radians

    static ArrayGeometry ula(int n, double spacing_m, double carrier_hz,
                             double light_speed = kDefaultLightSpeed);
    static ArrayGeometry uca(int n, double radius_m, double carrier_hz,
                             double light_speed = kDefaultLightSpeed);
    // Build directly from the phase constant; the physical spacing/radius is
    // backfilled for reference.
    static ArrayGeometry ula_from_tau(int n, double tau, double carrier_hz = 5.9e9,
                                      double light_speed = kDefaultLightSpeed);
    static ArrayGeometry uca_from_tau(int n, double tau, double carrier_hz = 5.9e9,
                                      double light_speed = kDefaultLightSpeed);
};

// Distance-power law parameters: gain = (c / (4*pi*f*d_ref))^2 * (d_ref/d)^exponent.
struct PathLossParams {
    double ref_distance = 1.0; // meters, > 0
    double exponent = 2.0;     // > 0
    double carrier_hz = 5.9e9;
    double light_speed = kDefaultLightSpeed;
};

// Receive steering vector of the base-station ULA towards azimuth theta.
// Element i (0-based) is exp(+j * i * tau * cos(theta)); squared norm = n.
arma::cx_vec steering_rx(double theta, const ArrayGeometry& bs);

// Transmit steering row vector of a vehicle ULA oriented at angle psi.
// Element i (0-based) is exp(-j * i * tau * cos(psi)).
arma::cx_rowvec steering_tx_ula(double psi, const ArrayGeometry& veh);

// Transmit steering row vector of a vehicle UCA; element m (0-based) is
// exp(-j * tau * cos(phi_m)) with phi_m = 2*pi*m/n + phi1.
arma::cx_rowvec steering_tx_uca(double phi1, const ArrayGeometry& veh);

// Distance-power gain g(d); throws std::domain_error for d <= 0.
double path_loss(double d, const PathLossParams& p);

// Squared magnitude of the inner product between the receive steering vectors
// at theta1 and theta0.  Closed Dirichlet-kernel form; equals n^2 exactly when
// cos(theta0) == cos(theta1).
double correlation_mag_sq(double theta0, double theta1, const ArrayGeometry& bs);

} // namespace lvs
