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

#include "lvs/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace lvs {

namespace {

constexpr double kWilsonZ = 1.959963984540054; // 95% two-sided

// Per-trial random stream channels.
constexpr std::uint64_t kChanObsLegit = 0;
constexpr std::uint64_t kChanObsAttack = 1;
constexpr std::uint64_t kChanJitter = 2;
constexpr std::uint64_t kChanWindow = 3;
constexpr std::uint64_t kChannels = 4;

RngStream trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint64_t channel) {
    return stream_for(seed, trial * kChannels + channel);
}

void validate_config(const TrialConfig& cfg) {
    if (cfg.trials < 1)
        throw std::domain_error("montecarlo: trials must be at least 1");
    if (cfg.jitter_std < 0.0)
        throw std::domain_error("montecarlo: jitter_std must be non-negative");
    if (cfg.t_min < 1 || cfg.t_max < cfg.t_min)
        throw std::domain_error("montecarlo: window range must satisfy 1 <= t_min <= t_max");
    if (!(cfg.prior_legit > 0.0) || !(cfg.prior_legit < 1.0))
        throw std::domain_error("montecarlo: prior must lie in (0, 1)");
    if (cfg.threads < 0)
        throw std::domain_error("montecarlo: thread count must be non-negative");
}

double checked_log_lambda(double lambda) {
    if (!(lambda > 0.0))
        throw std::domain_error("montecarlo: threshold lambda must be positive");
    return std::log(lambda);
}

RateEstimate make_estimate(std::uint64_t successes, std::uint64_t trials) {
    RateEstimate est;
    est.successes = successes;
    est.trials = trials;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    est.value = p;
    est.std_error = std::sqrt(p * (1.0 - p) / n);
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        kWilsonZ * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    est.wilson_lo = std::max(0.0, center - half);
    est.wilson_hi = std::min(1.0, center + half);
    return est;
}

// Draw y ~ CN(mean, cov I) component-wise from `rng` and return the linear
// statistic 2 Re{diff^H y} / cov0 without allocating.
double sampled_statistic(const arma::cx_vec& mean, double sqrt_cov, const arma::cx_vec& diff,
                         double cov0, RngStream& rng) {
    std::complex<double> acc{0.0, 0.0};
    for (arma::uword i = 0; i < mean.n_elem; ++i) {
        const std::complex<double> y = mean(i) + sqrt_cov * rng.cnormal();
        acc += std::conj(diff(i)) * y;
    }
    return 2.0 * acc.real() / cov0;
}

double mean_term(const GaussianObsModel& model0, const GaussianObsModel& model1) {
    const arma::cx_vec diff = model1.mean - model0.mean;
    return std::real(arma::cdot(diff, model1.mean + model0.mean)) / model0.cov_scalar;
}

// Squared mean shift over the null covariance; below kDegenerateShiftFloor
// the hypotheses coincide and the decision must not hinge on rounding crumbs.
double mean_shift(const GaussianObsModel& model0, const GaussianObsModel& model1) {
    return std::pow(arma::norm(model1.mean - model0.mean), 2) / model0.cov_scalar;
}

// Run `body(worker, lo, hi)` over a partition of [0, trials). Workers only
// tally into their own slots, so the aggregate is independent of the split.
template <typename Body>
void run_parallel(std::uint64_t trials, int threads, const Body& body) {
    if (threads <= 1 || trials < 2) {
        body(0, 0, trials);
        return;
    }
    const std::uint64_t chunk = (trials + threads - 1) / static_cast<std::uint64_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        if (lo >= trials)
            break;
        const std::uint64_t hi = std::min(trials, lo + chunk);
        pool.emplace_back([&body, w, lo, hi] { body(w, lo, hi); });
    }
    for (std::thread& th : pool)
        th.join();
}

std::uint64_t total(const std::vector<std::uint64_t>& counts) {
    std::uint64_t sum = 0;
    for (std::uint64_t c : counts)
        sum += c;
    return sum;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

} // namespace

int resolve_thread_count(int requested) {
    int threads = requested > 0 ? requested
                                : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LVS_SIM_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1)
            threads = std::min<long>(threads, cap);
    }
    return std::max(1, threads);
}

PolarPoint apply_jitter(const PolarPoint& claimed, double jitter_std, RngStream& rng) {
    if (jitter_std < 0.0)
        throw std::domain_error("apply_jitter: jitter_std must be non-negative");
    if (jitter_std == 0.0)
        return claimed;
    const double axis_std = jitter_std / std::sqrt(2.0);
    const Cartesian base = to_cartesian(claimed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Cartesian pos{base.x + axis_std * rng.normal(), base.y + axis_std * rng.normal()};
        if (std::hypot(pos.x, pos.y) > 1e-9)
            return to_polar(pos);
    }
    throw std::runtime_error("apply_jitter: displaced point kept landing on the receiver");
}

EmpiricalReport run_single_slot(const Scenario& scn, double theta1, double lambda,
                                const TrialConfig& cfg) {
    validate_config(cfg);
    const double log_lambda = checked_log_lambda(lambda);
    const auto start = std::chrono::steady_clock::now();

    const GaussianObsModel truth0 = legit_model(scn);
    // The simulated attack reproduces the legitimate receive covariance; no
    // transmit power can do that when the attacker noise floor already
    // exceeds it, so reject such scenarios instead of sampling a fiction.
    (void)optimal_power(scn, scn.claimed.d);
    const GaussianObsModel nominal1 = worst_case_attack_model(scn, theta1);
    const double sqrt_cov_true = std::sqrt(truth0.cov_scalar);

    const int threads = resolve_thread_count(cfg.threads);
    std::vector<std::uint64_t> fp(static_cast<std::size_t>(threads), 0);
    std::vector<std::uint64_t> det(static_cast<std::size_t>(threads), 0);

    if (cfg.jitter_std == 0.0 && mean_shift(truth0, nominal1) < kDegenerateShiftFloor) {
        // Perfect imitation: the decision is constant in the observation.
        const std::uint64_t flagged = (log_lambda <= 0.0) ? cfg.trials : 0;
        fp[0] = flagged;
        det[0] = flagged;
    } else if (cfg.jitter_std == 0.0) {
        const arma::cx_vec diff = nominal1.mean - truth0.mean;
        const double c = mean_term(truth0, nominal1);
        run_parallel(cfg.trials, threads,
                     [&](int w, std::uint64_t lo, std::uint64_t hi) {
                         for (std::uint64_t trial = lo; trial < hi; ++trial) {
                             RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                             if (sampled_statistic(truth0.mean, sqrt_cov_true, diff,
                                                   truth0.cov_scalar, s0) >= log_lambda + c)
                                 ++fp[static_cast<std::size_t>(w)];
                             RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                             if (sampled_statistic(nominal1.mean, sqrt_cov_true, diff,
                                                   truth0.cov_scalar, s1) >= log_lambda + c)
                                 ++det[static_cast<std::size_t>(w)];
                         }
                     });
    } else {
        run_parallel(cfg.trials, threads,
                     [&](int w, std::uint64_t lo, std::uint64_t hi) {
                         for (std::uint64_t trial = lo; trial < hi; ++trial) {
                             RngStream js = trial_stream(cfg.seed, trial, kChanJitter);
                             Scenario claimed_view = scn;
                             claimed_view.claimed =
                                 apply_jitter(scn.claimed, cfg.jitter_std, js);
                             const GaussianObsModel view0 = legit_model(claimed_view);
                             const GaussianObsModel view1 =
                                 worst_case_attack_model(claimed_view, theta1);
                             if (mean_shift(view0, view1) < kDegenerateShiftFloor) {
                                 if (log_lambda <= 0.0) {
                                     ++fp[static_cast<std::size_t>(w)];
                                     ++det[static_cast<std::size_t>(w)];
                                 }
                                 continue;
                             }
                             const arma::cx_vec diff = view1.mean - view0.mean;
                             const double c = mean_term(view0, view1);
                             RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                             // The displaced claim is where the vehicle really
                             // is; channel draws follow it, so the estimate
                             // averages the operating point over the error.
                             if (sampled_statistic(view0.mean, std::sqrt(view0.cov_scalar), diff,
                                                   view0.cov_scalar, s0) >= log_lambda + c)
                                 ++fp[static_cast<std::size_t>(w)];
                             RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                             // The attacker aims at the claim it observed.
                             if (sampled_statistic(view1.mean, std::sqrt(view1.cov_scalar), diff,
                                                   view0.cov_scalar, s1) >= log_lambda + c)
                                 ++det[static_cast<std::size_t>(w)];
                         }
                     });
    }

    EmpiricalReport report;
    report.alpha_hat = make_estimate(total(fp), cfg.trials);
    report.beta_hat = make_estimate(total(det), cfg.trials);
    report.analytic = rates_from_kl(min_kl_at(scn, theta1), lambda);
    report.total_error_hat = cfg.prior_legit * report.alpha_hat.value +
                             (1.0 - cfg.prior_legit) * (1.0 - report.beta_hat.value);
    report.runtime_ms = elapsed_ms(start);
    return report;
}

std::vector<EmpiricalReport> run_roc(const Scenario& scn, double theta1,
                                     const std::vector<double>& lambdas, const TrialConfig& cfg) {
    validate_config(cfg);
    if (lambdas.empty())
        throw std::invalid_argument("run_roc: empty threshold grid");
    std::vector<double> log_lambdas;
    log_lambdas.reserve(lambdas.size());
    for (double lambda : lambdas)
        log_lambdas.push_back(checked_log_lambda(lambda));
    const auto start = std::chrono::steady_clock::now();

    const GaussianObsModel truth0 = legit_model(scn);
    // Covariance imitation must be within the attacker's power budget.
    (void)optimal_power(scn, scn.claimed.d);
    const GaussianObsModel nominal1 = worst_case_attack_model(scn, theta1);
    const double sqrt_cov_true = std::sqrt(truth0.cov_scalar);
    const std::size_t n_lambda = lambdas.size();

    const int threads = resolve_thread_count(cfg.threads);
    // Per-worker, per-threshold exceedance counts; shared draws across the
    // whole grid (common random numbers).
    std::vector<std::vector<std::uint64_t>> fp(static_cast<std::size_t>(threads),
                                               std::vector<std::uint64_t>(n_lambda, 0));
    std::vector<std::vector<std::uint64_t>> det(static_cast<std::size_t>(threads),
                                                std::vector<std::uint64_t>(n_lambda, 0));

    const bool jittered = cfg.jitter_std > 0.0;
    const arma::cx_vec nominal_diff = nominal1.mean - truth0.mean;
    const double nominal_c = mean_term(truth0, nominal1);

    run_parallel(cfg.trials, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
        auto& fp_w = fp[static_cast<std::size_t>(w)];
        auto& det_w = det[static_cast<std::size_t>(w)];
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            // Centered statistics: malicious iff u >= log(lambda). A perfect
            // imitation pins u to 0, the exact indicator operating point.
            double u0;
            double u1;
            if (!jittered) {
                if (mean_shift(truth0, nominal1) < kDegenerateShiftFloor) {
                    u0 = 0.0;
                    u1 = 0.0;
                } else {
                    RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                    u0 = sampled_statistic(truth0.mean, sqrt_cov_true, nominal_diff,
                                           truth0.cov_scalar, s0) -
                         nominal_c;
                    RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                    u1 = sampled_statistic(nominal1.mean, sqrt_cov_true, nominal_diff,
                                           truth0.cov_scalar, s1) -
                         nominal_c;
                }
            } else {
                RngStream js = trial_stream(cfg.seed, trial, kChanJitter);
                Scenario claimed_view = scn;
                claimed_view.claimed = apply_jitter(scn.claimed, cfg.jitter_std, js);
                const GaussianObsModel view0 = legit_model(claimed_view);
                const GaussianObsModel view1 = worst_case_attack_model(claimed_view, theta1);
                if (mean_shift(view0, view1) < kDegenerateShiftFloor) {
                    u0 = 0.0;
                    u1 = 0.0;
                } else {
                    const arma::cx_vec diff = view1.mean - view0.mean;
                    const double c = mean_term(view0, view1);
                    RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                    u0 = sampled_statistic(view0.mean, std::sqrt(view0.cov_scalar), diff,
                                           view0.cov_scalar, s0) -
                         c;
                    RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                    u1 = sampled_statistic(view1.mean, std::sqrt(view1.cov_scalar), diff,
                                           view0.cov_scalar, s1) -
                         c;
                }
            }
            for (std::size_t l = 0; l < n_lambda; ++l) {
                if (u0 >= log_lambdas[l])
                    ++fp_w[l];
                if (u1 >= log_lambdas[l])
                    ++det_w[l];
            }
        }
    });

    const double kl_nominal = min_kl_at(scn, theta1);
    const double runtime = elapsed_ms(start);
    std::vector<EmpiricalReport> reports(n_lambda);
    for (std::size_t l = 0; l < n_lambda; ++l) {
        std::uint64_t fp_total = 0;
        std::uint64_t det_total = 0;
        for (int w = 0; w < threads; ++w) {
            fp_total += fp[static_cast<std::size_t>(w)][l];
            det_total += det[static_cast<std::size_t>(w)][l];
        }
        reports[l].alpha_hat = make_estimate(fp_total, cfg.trials);
        reports[l].beta_hat = make_estimate(det_total, cfg.trials);
        reports[l].analytic = rates_from_kl(kl_nominal, lambdas[l]);
        reports[l].total_error_hat = cfg.prior_legit * reports[l].alpha_hat.value +
                                     (1.0 - cfg.prior_legit) *
                                         (1.0 - reports[l].beta_hat.value);
        reports[l].runtime_ms = runtime;
    }
    return reports;
}

EmpiricalReport run_tracking(const Trajectory& traj, const Scenario& scn, double r_u,
                             AttackMode mode, double lambda, const TrialConfig& cfg) {
    validate_config(cfg);
    const double log_lambda = checked_log_lambda(lambda);
    if (traj.slots.empty())
        throw std::invalid_argument("run_tracking: empty trajectory");
    const auto start = std::chrono::steady_clock::now();

    const int t_hi = std::min<int>(cfg.t_max, static_cast<int>(traj.slots.size()));
    const int t_lo = std::min(cfg.t_min, t_hi);

    // Nominal (noise-free claim) attack geometry and per-slot models.
    const std::vector<PolarPoint> positions = attack_positions(traj, scn, r_u, mode);
    std::vector<GaussianObsModel> models0(static_cast<std::size_t>(t_hi));
    std::vector<GaussianObsModel> models1(static_cast<std::size_t>(t_hi));
    std::vector<arma::cx_vec> diffs(static_cast<std::size_t>(t_hi));
    std::vector<double> c_slot(static_cast<std::size_t>(t_hi));
    std::vector<double> sqrt_cov(static_cast<std::size_t>(t_hi));
    std::vector<bool> degenerate(static_cast<std::size_t>(t_hi), false);
    std::vector<double> kl_prefix(static_cast<std::size_t>(t_hi) + 1, 0.0);
    for (int t = 0; t < t_hi; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        const Scenario scn_t = scenario_at(scn, traj, ti);
        models0[ti] = legit_model(scn_t);
        // Covariance imitation must be feasible at every slot's claim.
        (void)optimal_power(scn_t, scn_t.claimed.d);
        models1[ti] = worst_case_attack_model(scn_t, positions[ti].theta);
        diffs[ti] = models1[ti].mean - models0[ti].mean;
        c_slot[ti] = mean_term(models0[ti], models1[ti]);
        sqrt_cov[ti] = std::sqrt(models0[ti].cov_scalar);
        degenerate[ti] = mean_shift(models0[ti], models1[ti]) < kDegenerateShiftFloor;
        kl_prefix[ti + 1] = kl_prefix[ti] + min_kl_at(scn_t, positions[ti].theta);
    }

    const int threads = resolve_thread_count(cfg.threads);
    std::vector<std::uint64_t> fp(static_cast<std::size_t>(threads), 0);
    std::vector<std::uint64_t> det(static_cast<std::size_t>(threads), 0);
    const bool jittered = cfg.jitter_std > 0.0;
    const Cartesian road_base = to_cartesian(traj.slots.front().claimed);

    run_parallel(cfg.trials, threads, [&](int w, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            int t_window = t_lo;
            if (t_hi > t_lo) {
                RngStream ws = trial_stream(cfg.seed, trial, kChanWindow);
                t_window = static_cast<int>(ws.uniform_int(t_lo, t_hi));
            }
            double u0;
            double u1;
            double gamma_mean;
            if (!jittered) {
                // A perfectly imitated slot contributes exactly zero to both
                // the statistic and the threshold; skipping it keeps rounding
                // crumbs of m1 - m0 from deciding the outcome.
                gamma_mean = 0.0;
                RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                u0 = 0.0;
                u1 = 0.0;
                for (int t = 0; t < t_window; ++t) {
                    const auto ti = static_cast<std::size_t>(t);
                    if (degenerate[ti])
                        continue;
                    gamma_mean += c_slot[ti];
                    u0 += sampled_statistic(models0[ti].mean, sqrt_cov[ti], diffs[ti],
                                            models0[ti].cov_scalar, s0);
                    u1 += sampled_statistic(models1[ti].mean, sqrt_cov[ti], diffs[ti],
                                            models0[ti].cov_scalar, s1);
                }
            } else {
                // Claimed positions carry localization error: perturb the
                // track, rebuild the per-slot models and the attack geometry
                // against it, and draw the channel at the perturbed claims.
                RngStream js = trial_stream(cfg.seed, trial, kChanJitter);
                Trajectory claimed_view = traj;
                claimed_view.slots.resize(static_cast<std::size_t>(t_window));
                for (int t = 0; t < t_window; ++t) {
                    auto& slot = claimed_view.slots[static_cast<std::size_t>(t)];
                    slot.claimed = apply_jitter(slot.claimed, cfg.jitter_std, js);
                }
                const std::vector<PolarPoint> view_positions = resilient_attack_positions(
                    claimed_view, scn, r_u, mode, road_base, traj.bearing);
                gamma_mean = 0.0;
                u0 = 0.0;
                u1 = 0.0;
                RngStream s0 = trial_stream(cfg.seed, trial, kChanObsLegit);
                RngStream s1 = trial_stream(cfg.seed, trial, kChanObsAttack);
                for (int t = 0; t < t_window; ++t) {
                    const auto ti = static_cast<std::size_t>(t);
                    const Scenario view_scn = scenario_at(scn, claimed_view, ti);
                    const GaussianObsModel view0 = legit_model(view_scn);
                    const GaussianObsModel view1 =
                        worst_case_attack_model(view_scn, view_positions[ti].theta);
                    if (mean_shift(view0, view1) < kDegenerateShiftFloor)
                        continue;
                    const arma::cx_vec diff = view1.mean - view0.mean;
                    gamma_mean += mean_term(view0, view1);
                    u0 += sampled_statistic(view0.mean, std::sqrt(view0.cov_scalar), diff,
                                            view0.cov_scalar, s0);
                    u1 += sampled_statistic(view1.mean, std::sqrt(view1.cov_scalar), diff,
                                            view0.cov_scalar, s1);
                }
            }
            if (u0 >= log_lambda + gamma_mean)
                ++fp[static_cast<std::size_t>(w)];
            if (u1 >= log_lambda + gamma_mean)
                ++det[static_cast<std::size_t>(w)];
        }
    });

    EmpiricalReport report;
    report.alpha_hat = make_estimate(total(fp), cfg.trials);
    report.beta_hat = make_estimate(total(det), cfg.trials);
    // Closed form for the randomized window: average the per-length rates.
    RatePair mix{0.0, 0.0};
    for (int t_window = t_lo; t_window <= t_hi; ++t_window) {
        const RatePair r =
            rates_from_kl(kl_prefix[static_cast<std::size_t>(t_window)], lambda);
        mix.false_positive += r.false_positive;
        mix.detection += r.detection;
    }
    const double n_windows = static_cast<double>(t_hi - t_lo + 1);
    mix.false_positive /= n_windows;
    mix.detection /= n_windows;
    report.analytic = mix;
    report.total_error_hat = cfg.prior_legit * report.alpha_hat.value +
                             (1.0 - cfg.prior_legit) * (1.0 - report.beta_hat.value);
    report.runtime_ms = elapsed_ms(start);
    return report;
}

std::vector<std::vector<double>> sweep(
    const std::vector<std::vector<double>>& axes,
    const std::function<std::vector<double>(const std::vector<double>&)>& evaluator) {
    if (axes.empty())
        throw std::invalid_argument("sweep: no axes given");
    std::size_t rows = 1;
    for (const auto& axis : axes) {
        if (axis.empty())
            throw std::invalid_argument("sweep: empty axis");
        rows *= axis.size();
    }
    std::vector<std::vector<double>> out;
    out.reserve(rows);
    std::vector<std::size_t> index(axes.size(), 0);
    std::vector<double> point(axes.size());
    for (std::size_t row = 0; row < rows; ++row) {
        for (std::size_t a = 0; a < axes.size(); ++a)
            point[a] = axes[a][index[a]];
        out.push_back(evaluator(point));
        // Odometer increment, last axis fastest.
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++index[a] < axes[a].size())
                break;
            index[a] = 0;
        }
    }
    return out;
}

} // namespace lvs
