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

#include "lvs/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace lvs {

namespace {

void check_pair(const GaussianObsModel& model0, const GaussianObsModel& model1) {
    if (model0.mean.n_elem != model1.mean.n_elem)
        throw std::invalid_argument("detector: observation models differ in dimension");
    if (!(model0.cov_scalar > 0.0) || !(model1.cov_scalar > 0.0))
        throw std::domain_error("detector: covariances must be positive");
}

double checked_log_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("detector: threshold lambda must be positive");
    return std::log(lambda);
}

} // namespace

double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double q_function_inv(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("q_function_inv: argument must lie in (0, 1)");
    // Bisection to a tight bracket, then Newton to machine precision.
    double lo = -40.0;
    double hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    const double inv_sqrt_2pi = 0.3989422804014327;
    for (int i = 0; i < 8; ++i) {
        const double f = q_function(x) - p;
        const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
        if (pdf <= 0.0)
            break;
        x += f / pdf; // Q' = -pdf, so the Newton step is +f/pdf
    }
    return x;
}

double test_statistic(const arma::cx_vec& y, const GaussianObsModel& model0,
                      const GaussianObsModel& model1) {
    check_pair(model0, model1);
    if (y.n_elem != model0.mean.n_elem)
        throw std::invalid_argument("test_statistic: observation dimension mismatch");
    const arma::cx_vec diff = model1.mean - model0.mean;
    return 2.0 * std::real(arma::cdot(diff, y)) / model0.cov_scalar;
}

double threshold_gamma(const GaussianObsModel& model0, const GaussianObsModel& model1,
                       double lambda) {
    check_pair(model0, model1);
    const double log_lambda = checked_log_lambda(lambda);
    const arma::cx_vec diff = model1.mean - model0.mean;
    const arma::cx_vec sum = model1.mean + model0.mean;
    return log_lambda + std::real(arma::cdot(diff, sum)) / model0.cov_scalar;
}

bool decide(const arma::cx_vec& y, const GaussianObsModel& model0,
            const GaussianObsModel& model1, double lambda) {
    check_pair(model0, model1);
    const double log_lambda = checked_log_lambda(lambda);
    const double shift =
        std::pow(arma::norm(model1.mean - model0.mean), 2) / model0.cov_scalar;
    if (shift < kDegenerateShiftFloor)
        return log_lambda <= 0.0; // identical hypotheses: constant decision
    return test_statistic(y, model0, model1) >= threshold_gamma(model0, model1, lambda);
}

RatePair rates_from_kl(double kl, double lambda) {
    const double log_lambda = checked_log_lambda(lambda);
    if (kl < 0.0)
        throw std::domain_error("rates_from_kl: divergence must be non-negative");
    RatePair rates;
    if (kl < kDegenerateShiftFloor) {
        // The hypotheses coincide: every observation falls on the same side.
        const double flag = (log_lambda <= 0.0) ? 1.0 : 0.0;
        rates.false_positive = flag;
        rates.detection = flag;
        return rates;
    }
    const double spread = std::sqrt(2.0 * kl);
    rates.false_positive = q_function((log_lambda + kl) / spread);
    rates.detection = q_function((log_lambda - kl) / spread);
    return rates;
}

RatePair analytic_rates(const Scenario& scn, double theta1, double lambda) {
    return rates_from_kl(min_kl_at(scn, theta1), lambda);
}

RatePair rates_for_models(const GaussianObsModel& model0, const GaussianObsModel& model1,
                          double lambda) {
    check_pair(model0, model1);
    const double log_lambda = checked_log_lambda(lambda);
    // The linear statistic is Gaussian under both hypotheses: means -+D and
    // +D with D the squared mean shift over cov0; its variance is 2D under
    // the null and 2D * (cov1/cov0) under the alternative.
    const double shift =
        std::pow(arma::norm(model1.mean - model0.mean), 2) / model0.cov_scalar;
    if (shift < kDegenerateShiftFloor) {
        const double flag = (log_lambda <= 0.0) ? 1.0 : 0.0;
        return RatePair{flag, flag};
    }
    const double spread = std::sqrt(2.0 * shift);
    const double rho = model1.cov_scalar / model0.cov_scalar;
    RatePair rates;
    rates.false_positive = q_function((log_lambda + shift) / spread);
    rates.detection = q_function((log_lambda - shift) / (spread * std::sqrt(rho)));
    return rates;
}

double total_error(const RatePair& rates, double prior_legit) {
    if (!(prior_legit > 0.0) || !(prior_legit < 1.0))
        throw std::domain_error("total_error: prior must lie in (0, 1)");
    return prior_legit * rates.false_positive + (1.0 - prior_legit) * (1.0 - rates.detection);
}

double bayes_threshold(double prior_legit) {
    if (!(prior_legit > 0.0) || !(prior_legit < 1.0))
        throw std::domain_error("bayes_threshold: prior must lie in (0, 1)");
    return prior_legit / (1.0 - prior_legit);
}

double min_total_error(double kl, double prior_legit) {
    return total_error(rates_from_kl(kl, bayes_threshold(prior_legit)), prior_legit);
}

} // namespace lvs
