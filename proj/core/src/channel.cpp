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

#include "lvs/channel.hpp"

#include <stdexcept>

namespace lvs {

arma::cx_mat los_matrix(double theta_rx, const arma::cx_rowvec& tx_steering, const ArrayGeometry& bs) {
    if (tx_steering.n_elem == 0)
        throw std::invalid_argument("los_matrix: empty transmit steering vector");
    const arma::cx_vec r = steering_rx(theta_rx, bs);
    return r * tx_steering;
}

arma::cx_mat sample_channel(double k_factor, const arma::cx_mat& los, RngStream& rng, bool pure_los) {
    if (!pure_los && !(k_factor >= 0.0))
        throw std::domain_error("sample_channel: K factor must be >= 0");
    if (pure_los)
        return los;
    const double spec = std::sqrt(k_factor / (1.0 + k_factor));
    const double diff = std::sqrt(1.0 / (1.0 + k_factor));
    arma::cx_mat h(los.n_rows, los.n_cols);
    for (arma::uword c = 0; c < h.n_cols; ++c)
        for (arma::uword r = 0; r < h.n_rows; ++r)
            h(r, c) = spec * los(r, c) + diff * rng.cnormal();
    return h;
}

arma::cx_vec mean_vector(const ChannelParams& chan, double d, const arma::cx_mat& los,
                         const arma::cx_vec& beamformer) {
    if (los.n_cols != beamformer.n_elem)
        throw std::invalid_argument("mean_vector: beamformer length does not match the array");
    if (std::abs(arma::norm(beamformer) - 1.0) > 1e-9)
        throw std::invalid_argument("mean_vector: beamformer must have unit norm");
    if (!(chan.tx_power >= 0.0))
        throw std::domain_error("mean_vector: transmit power must be >= 0");
    const double g = path_loss(d, chan.path);
    const double k_share = chan.pure_los ? 1.0 : chan.k_factor / (1.0 + chan.k_factor);
    const double scale = std::sqrt(chan.tx_power * g * k_share);
    return scale * (los * beamformer);
}

double cov_scalar(const ChannelParams& chan, double d) {
    if (!(chan.noise_var > 0.0))
        throw std::domain_error("cov_scalar: noise variance must be positive");
    if (!(chan.tx_power >= 0.0))
        throw std::domain_error("cov_scalar: transmit power must be >= 0");
    if (chan.pure_los)
        return chan.noise_var;
    const double g = path_loss(d, chan.path);
    return chan.tx_power * g / (1.0 + chan.k_factor) + chan.noise_var;
}

ObservationSnapshot sample_observation(const GaussianObsModel& model, RngStream& rng, int slot) {
    if (!(model.cov_scalar > 0.0))
        throw std::domain_error("sample_observation: covariance must be positive");
    const double s = std::sqrt(model.cov_scalar);
    arma::cx_vec y(model.mean.n_elem);
    for (arma::uword i = 0; i < y.n_elem; ++i)
        y(i) = model.mean(i) + s * rng.cnormal();
    return {std::move(y), slot};
}

double log_likelihood(const arma::cx_vec& y, const GaussianObsModel& model) {
    if (y.n_elem != model.mean.n_elem)
        throw std::invalid_argument("log_likelihood: dimension mismatch");
    if (!(model.cov_scalar > 0.0))
        throw std::domain_error("log_likelihood: covariance must be positive");
    const double n = static_cast<double>(y.n_elem);
    const double quad = std::pow(arma::norm(y - model.mean), 2);
    return -n * std::log(kPi * model.cov_scalar) - quad / model.cov_scalar;
}

} // namespace lvs
