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

#include "lvs/geometry.hpp"
#include "lvs/rng.hpp"

namespace lvs {

// Per-link channel parameters.  All quantities are linear (not dB); the K
// factor describes the specular-to-diffuse power split, with `pure_los`
// standing in for an infinite K.
struct ChannelParams {
    double k_factor = 1.0;  // Rician K, >= 0
    bool pure_los = false;  // true: no diffuse component at all (K -> infinity)
    double noise_var = 1.0; // receiver noise variance sigma^2, > 0
    double tx_power = 1.0;  // transmit power p, >= 0
    PathLossParams path{};
};

// The received snapshot is complex Gaussian with a steering-aligned mean and
// a scalar covariance (diffuse fading plus thermal noise).
struct GaussianObsModel {
    arma::cx_vec mean;
    double cov_scalar = 1.0; // > 0

    int dim() const { return static_cast<int>(mean.n_elem); }
};

struct ObservationSnapshot {
    arma::cx_vec y;
    int slot = 0;
};

// Rank-one specular channel matrix: receive steering at theta_rx times the
// given transmit steering row.
arma::cx_mat los_matrix(double theta_rx, const arma::cx_rowvec& tx_steering, const ArrayGeometry& bs);

// Draw one channel realization: sqrt(K/(1+K)) * los + sqrt(1/(1+K)) * diffuse,
// diffuse entries i.i.d. unit complex normal.  With pure_los the diffuse part
// is omitted entirely.
arma::cx_mat sample_channel(double k_factor, const arma::cx_mat& los, RngStream& rng,
                            bool pure_los = false);

// Mean of the received snapshot for a transmitter at distance d using the
// given unit-norm beamformer: sqrt(p * g(d) * K/(1+K)) * los * b.
arma::cx_vec mean_vector(const ChannelParams& chan, double d, const arma::cx_mat& los,
                         const arma::cx_vec& beamformer);

// Scalar covariance of the received snapshot: p * g(d) / (1+K) + sigma^2.
double cov_scalar(const ChannelParams& chan, double d);

// Draw y = mean + sqrt(cov) * w, w i.i.d. unit complex normal.
ObservationSnapshot sample_observation(const GaussianObsModel& model, RngStream& rng, int slot = 0);

// Log density of y under the model: -n*log(pi*cov) - ||y - mean||^2 / cov.
double log_likelihood(const arma::cx_vec& y, const GaussianObsModel& model);

} // namespace lvs
