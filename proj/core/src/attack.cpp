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

#include "lvs/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lvs {

namespace {

// Attacker K factors below this are treated as zero: the imitation antenna
// bound diverges.
constexpr double kMinAttackerK = 1e-6;

// Specular power share K/(1+K), with the pure-LOS flag standing in for K = inf.
double k_share(const ChannelParams& chan) {
    return chan.pure_los ? 1.0 : chan.k_factor / (1.0 + chan.k_factor);
}

// Squared norm of the legitimate mean divided by the receive array size:
// p0 * g(d0) * K0/(1+K0) * N0.
double legit_mean_power(const Scenario& scn) {
    const double g0 = path_loss(scn.claimed.d, scn.legit_chan.path);
    return scn.legit_chan.tx_power * g0 * k_share(scn.legit_chan) * scn.veh_legit.n;
}

arma::cx_rowvec tx_steering(const ArrayGeometry& veh, double psi) {
    return veh.kind == ArrayKind::uca ? steering_tx_uca(psi, veh) : steering_tx_ula(psi, veh);
}

// Principal decomposition of the attacker's effective channel: top singular
// direction u1 with gain eta, the target projection c1 = u1^H G^H m0, and a
// deterministic unit filler q orthogonal to u1.
struct PrincipalParts {
    arma::cx_vec u1;
    double eta = 0.0;
    std::complex<double> c1{};
    arma::cx_vec q;
};

PrincipalParts principal_parts(const Scenario& scn, double d1, double theta1, double psi1, double p1) {
    if (scn.mal_chan.pure_los)
        throw std::invalid_argument("attack synthesis requires a finite attacker K factor");
    if (!(scn.mal_chan.k_factor > 0.0))
        throw UnboundedAntennas("attacker K factor is zero: no specular path to shape");
    if (!(p1 > 0.0))
        throw std::domain_error("attack synthesis requires a positive transmit power");
    if (scn.veh_mal.n < 2)
        throw std::invalid_argument("attacker array needs at least 2 antennas");

    const arma::cx_rowvec t1 = tx_steering(scn.veh_mal, psi1);
    const arma::cx_mat h1 = los_matrix(theta1, t1, scn.bs);
    const double g1 = path_loss(d1, scn.mal_chan.path);
    const double gc = std::sqrt(p1 * g1 * k_share(scn.mal_chan));
    const arma::cx_mat g_eff = gc * h1;

    // Rank-one quadratic form; its principal axis is the imitation direction.
    const arma::cx_mat quad = g_eff.t() * g_eff;
    arma::cx_mat u, v;
    arma::vec s;
    if (!arma::svd(u, s, v, quad))
        throw std::runtime_error("attack synthesis: SVD failed");

    PrincipalParts parts;
    parts.eta = s(0);
    parts.u1 = u.col(0);
    if (!(parts.eta > 0.0))
        throw std::runtime_error("attack synthesis: degenerate effective channel");

    const arma::cx_vec m0 = legit_model(scn).mean;
    parts.c1 = arma::cdot(parts.u1, g_eff.t() * m0);

    // Unit filler orthogonal to u1, built from the second basis vector; u1 has
    // full support (unit-modulus steering entries), so this never vanishes.
    arma::cx_vec e2(scn.veh_mal.n, arma::fill::zeros);
    e2(1) = 1.0;
    arma::cx_vec q = e2 - parts.u1 * arma::cdot(parts.u1, e2);
    parts.q = q / arma::norm(q);
    return parts;
}

arma::cx_vec assemble_beamformer(const PrincipalParts& parts, std::complex<double> coef) {
    const double mag = std::abs(coef);
    const double resid = std::sqrt(std::max(0.0, 1.0 - mag * mag));
    arma::cx_vec b = coef * parts.u1 + resid * parts.q;
    return b / arma::norm(b);
}

} // namespace

// ---------- scenario helpers ----------

double received_power_legit(const Scenario& scn) {
    return scn.legit_chan.tx_power * path_loss(scn.claimed.d, scn.legit_chan.path);
}

void set_received_power(Scenario& scn, double received_power) {
    if (!(received_power > 0.0))
        throw std::domain_error("set_received_power: value must be positive");
    scn.legit_chan.tx_power = received_power / path_loss(scn.claimed.d, scn.legit_chan.path);
}

bool angle_allowed(const Scenario& scn, double theta) {
    const double t = normalize_angle(theta);
    for (const AngleInterval& iv : scn.forbidden_angles)
        if (t >= iv.lo && t <= iv.hi)
            return false;
    return true;
}

GaussianObsModel legit_model(const Scenario& scn) {
    const arma::cx_rowvec t0 = tx_steering(scn.veh_legit, scn.psi_legit);
    const arma::cx_vec b0 = t0.t() / arma::norm(t0); // align with the specular path
    const arma::cx_mat h0 = los_matrix(scn.claimed.theta, t0, scn.bs);
    GaussianObsModel model;
    model.mean = mean_vector(scn.legit_chan, scn.claimed.d, h0, b0);
    model.cov_scalar = cov_scalar(scn.legit_chan, scn.claimed.d);
    return model;
}

arma::cx_vec attack_target_mean(const Scenario& scn, double theta1) {
    const double amp = std::sqrt(legit_mean_power(scn));
    const arma::cx_vec r0 = steering_rx(scn.claimed.theta, scn.bs);
    const arma::cx_vec r1 = steering_rx(theta1, scn.bs);
    return amp * r1 * (arma::cdot(r1, r0) / static_cast<double>(scn.bs.n));
}

GaussianObsModel worst_case_attack_model(const Scenario& scn, double theta1) {
    GaussianObsModel model;
    model.mean = attack_target_mean(scn, theta1);
    model.cov_scalar = cov_scalar(scn.legit_chan, scn.claimed.d);
    return model;
}

GaussianObsModel attack_model(const Scenario& scn, double d1, double theta1, double psi1,
                              double p1, const arma::cx_vec& b1) {
    ChannelParams chan = scn.mal_chan;
    chan.tx_power = p1;
    const arma::cx_rowvec t1 = tx_steering(scn.veh_mal, psi1);
    const arma::cx_mat h1 = los_matrix(theta1, t1, scn.bs);
    GaussianObsModel model;
    model.mean = mean_vector(chan, d1, h1, b1);
    model.cov_scalar = cov_scalar(chan, d1);
    return model;
}

// ---------- attack synthesis ----------

double optimal_power(const Scenario& scn, double d1) {
    if (scn.mal_chan.pure_los)
        throw std::invalid_argument("optimal_power: attacker K factor must be finite");
    const double cov0 = cov_scalar(scn.legit_chan, scn.claimed.d);
    const double excess = cov0 - scn.mal_chan.noise_var;
    if (!(excess > 0.0))
        throw InfeasibleAttack("attacker noise floor exceeds the legitimate diffuse-plus-noise level");
    const double g1 = path_loss(d1, scn.mal_chan.path);
    return (scn.mal_chan.k_factor + 1.0) / g1 * excess;
}

int min_antennas(const Scenario& scn) {
    if (scn.mal_chan.pure_los)
        throw std::invalid_argument("min_antennas: attacker K factor must be finite");
    const double cov0 = cov_scalar(scn.legit_chan, scn.claimed.d);
    const double excess = cov0 - scn.mal_chan.noise_var;
    if (!(excess > 0.0))
        throw InfeasibleAttack("attacker noise floor exceeds the legitimate diffuse-plus-noise level");
    if (scn.mal_chan.k_factor < kMinAttackerK)
        throw UnboundedAntennas("attacker K factor below 1e-6: antenna bound diverges");
    const double ratio = legit_mean_power(scn) / (scn.mal_chan.k_factor * excess);
    const double bound = std::max(2.0, ratio);
    return static_cast<int>(std::ceil(bound));
}

arma::cx_vec optimal_beamformer(const Scenario& scn, double d1, double theta1, double psi1) {
    const int n_min = min_antennas(scn);
    if (scn.veh_mal.n < n_min)
        throw ConstrainedRegime("attacker array smaller than the imitation minimum (" +
                                std::to_string(n_min) + "); use constrained_beamformer");
    const double p1 = optimal_power(scn, d1);
    const PrincipalParts parts = principal_parts(scn, d1, theta1, psi1, p1);
    std::complex<double> coef = parts.c1 / parts.eta;
    const double mag = std::abs(coef);
    if (mag > 1.0 + 1e-6)
        throw std::runtime_error("optimal_beamformer: principal component out of range");
    if (mag > 1.0)
        coef /= mag;
    return assemble_beamformer(parts, coef);
}

arma::cx_vec constrained_beamformer(const Scenario& scn, double d1, double theta1, double psi1,
                                    double p1) {
    const PrincipalParts parts = principal_parts(scn, d1, theta1, psi1, p1);
    std::complex<double> coef = parts.c1 / parts.eta;
    const double mag = std::abs(coef);
    if (mag > 1.0)
        coef = parts.c1 / std::abs(parts.c1); // clamp to the unit circle, keep the phase
    return assemble_beamformer(parts, coef);
}

// ---------- divergences ----------

double kl_divergence(const GaussianObsModel& model0, const GaussianObsModel& model1) {
    if (model0.mean.n_elem != model1.mean.n_elem)
        throw std::invalid_argument("kl_divergence: dimension mismatch");
    if (!(model0.cov_scalar > 0.0) || !(model1.cov_scalar > 0.0))
        throw std::domain_error("kl_divergence: covariances must be positive");
    const double n = static_cast<double>(model0.mean.n_elem);
    const double rho = model1.cov_scalar / model0.cov_scalar;
    const double shift = std::pow(arma::norm(model0.mean - model1.mean), 2) / model0.cov_scalar;
    return n * (rho - 1.0 - std::log(rho)) + shift;
}

double min_kl_at(const Scenario& scn, double theta1) {
    const double cov0 = cov_scalar(scn.legit_chan, scn.claimed.d);
    const double factor = legit_mean_power(scn) / cov0;
    const double nb = static_cast<double>(scn.bs.n);
    const double corr = correlation_mag_sq(scn.claimed.theta, theta1, scn.bs);
    return factor * std::max(0.0, nb - corr / nb);
}

// ---------- best azimuth ----------

double optimal_theta(const Scenario& scn) {
    const double theta_c = normalize_angle(scn.claimed.theta);
    const double mirror = normalize_angle(-theta_c);
    // The correlation peaks at cos(theta1) == cos(theta_c); prefer the claimed
    // azimuth itself, then its mirror.
    if (angle_allowed(scn, theta_c))
        return theta_c;
    if (angle_allowed(scn, mirror))
        return mirror;

    constexpr int kGridPoints = 100000;
    constexpr double kEdgeNudge = 1e-9;
    const double step = 2.0 * kPi / kGridPoints;

    const auto value = [&](double theta) { return correlation_mag_sq(theta_c, theta, scn.bs); };

    std::vector<double> candidates;
    candidates.reserve(kGridPoints / 8);
    double best_grid = std::numeric_limits<double>::lowest();
    double best_grid_theta = 0.0;
    bool any = false;
    for (int i = 0; i < kGridPoints; ++i) {
        const double theta = -kPi + (i + 1) * step;
        if (!angle_allowed(scn, theta))
            continue;
        any = true;
        const double v = value(theta);
        if (v > best_grid) {
            best_grid = v;
            best_grid_theta = theta;
        }
    }
    // Feasible edges of each forbidden interval are natural maximizer spots.
    for (const AngleInterval& iv : scn.forbidden_angles) {
        for (double edge : {iv.lo - kEdgeNudge, iv.hi + kEdgeNudge}) {
            edge = normalize_angle(edge);
            if (angle_allowed(scn, edge))
                candidates.push_back(edge);
        }
    }
    if (!any && candidates.empty())
        throw InfeasibleAttack("optimal_theta: empty feasible angle set");

    if (any) {
        // Golden-section polish around the best grid cell, treating forbidden
        // angles as worthless.
        const auto guarded = [&](double theta) {
            return angle_allowed(scn, theta) ? value(theta) : std::numeric_limits<double>::lowest();
        };
        double lo = best_grid_theta - step;
        double hi = best_grid_theta + step;
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = hi - kInvPhi * (hi - lo);
        double x2 = lo + kInvPhi * (hi - lo);
        double f1 = guarded(x1);
        double f2 = guarded(x2);
        while (hi - lo > 1e-10) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kInvPhi * (hi - lo);
                f2 = guarded(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kInvPhi * (hi - lo);
                f1 = guarded(x1);
            }
        }
        candidates.push_back(best_grid_theta);
        const double polished = normalize_angle(0.5 * (lo + hi));
        if (angle_allowed(scn, polished))
            candidates.push_back(polished);
    }

    double best_val = std::numeric_limits<double>::lowest();
    double best_theta = 0.0;
    for (double theta : candidates) {
        const double v = value(theta);
        const double tie_margin = 1e-9 * scn.bs.n * scn.bs.n;
        if (v > best_val + tie_margin) {
            best_val = v;
            best_theta = theta;
        } else if (v > best_val - tie_margin) {
            // Tie: prefer the angle closest to the claimed azimuth.
            const double cur = std::abs(normalize_angle(theta - theta_c));
            const double old = std::abs(normalize_angle(best_theta - theta_c));
            if (cur < old) {
                best_val = std::max(best_val, v);
                best_theta = theta;
            }
        }
    }
    return best_theta;
}

AttackPlan make_attack_plan(const Scenario& scn, double d1) {
    AttackPlan plan;
    plan.theta1_star = optimal_theta(scn);
    plan.n1_star = min_antennas(scn);
    plan.p1_star = optimal_power(scn, d1);
    plan.b1_star = optimal_beamformer(scn, d1, plan.theta1_star, scn.psi_mal);
    plan.min_kl = min_kl_at(scn, plan.theta1_star);
    return plan;
}

} // namespace lvs
