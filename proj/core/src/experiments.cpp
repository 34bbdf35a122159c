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

#include "lvs/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "lvs/detector.hpp"
#include "lvs/montecarlo.hpp"
#include "lvs/tracking.hpp"

namespace lvs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        v.push_back(lo);
        return v;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        v.push_back(lo + i * step);
    return v;
}

double resolve_theta1(const ParsedConfig& cfg, const Scenario& scn) {
    return cfg.theta1_auto ? optimal_theta(scn) : cfg.theta1;
}

double resolve_lambda(const ParsedConfig& cfg) {
    return cfg.exp.lambda_auto ? bayes_threshold(cfg.prior_legit) : cfg.exp.lambda;
}

TrialConfig trial_config(const ParsedConfig& cfg) {
    TrialConfig tc;
    tc.trials = cfg.exp.trials;
    tc.seed = cfg.exp.seed;
    tc.jitter_std = cfg.exp.jitter_std;
    tc.prior_legit = cfg.prior_legit;
    tc.threads = cfg.exp.threads;
    return tc;
}

ExperimentTable roc_experiment(const ParsedConfig& cfg) {
    ExperimentTable table;
    table.columns = {"lambda",       "log_lambda", "alpha_analytic",
                     "beta_analytic", "alpha_mc",   "beta_mc",
                     "alpha_se",      "beta_se",    "total_error_analytic",
                     "total_error_mc"};
    const double theta1 = resolve_theta1(cfg, cfg.scn);
    const double kl = min_kl_at(cfg.scn, theta1);
    const std::vector<double> log_lambdas =
        linspace(cfg.exp.log_lambda_min, cfg.exp.log_lambda_max, cfg.exp.lambda_points);
    std::vector<double> lambdas;
    lambdas.reserve(log_lambdas.size());
    for (double ll : log_lambdas)
        lambdas.push_back(std::exp(ll));

    std::vector<EmpiricalReport> reports;
    if (cfg.exp.trials > 0)
        reports = run_roc(cfg.scn, theta1, lambdas, trial_config(cfg));

    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const RatePair rates = rates_from_kl(kl, lambdas[i]);
        std::vector<double> row{lambdas[i],
                                log_lambdas[i],
                                rates.false_positive,
                                rates.detection,
                                kNaN,
                                kNaN,
                                kNaN,
                                kNaN,
                                total_error(rates, cfg.prior_legit),
                                kNaN};
        if (!reports.empty()) {
            row[4] = reports[i].alpha_hat.value;
            row[5] = reports[i].beta_hat.value;
            row[6] = reports[i].alpha_hat.std_error;
            row[7] = reports[i].beta_hat.std_error;
            row[9] = reports[i].total_error_hat;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ExperimentTable angle_map_experiment(const ParsedConfig& cfg, bool with_channel) {
    ExperimentTable table;
    if (with_channel)
        table.columns = {"theta1", "theta1_over_pi", "corr_mag_sq", "min_kl"};
    else
        table.columns = {"theta1", "theta1_over_pi", "corr_mag_sq", "kl_geometry"};
    const double nb = static_cast<double>(cfg.scn.bs.n);
    for (double theta1 : linspace(-kPi, kPi, cfg.exp.theta_points)) {
        const double corr = correlation_mag_sq(cfg.scn.claimed.theta, theta1, cfg.scn.bs);
        const double tail = with_channel ? min_kl_at(cfg.scn, theta1)
                                         : std::max(0.0, nb - corr / nb);
        table.rows.push_back({theta1, theta1 / kPi, corr, tail});
    }
    return table;
}

ExperimentTable total_error_grid_experiment(const ParsedConfig& cfg) {
    ExperimentTable table;
    table.columns = {"nb",     "n0",       "k0_db",   "theta1",
                     "kl",     "lambda",   "total_error_analytic",
                     "alpha_mc", "beta_mc", "total_error_mc"};
    const double lambda = resolve_lambda(cfg);
    std::vector<double> k0_axis = cfg.exp.k0_db_list;
    if (k0_axis.empty())
        k0_axis.push_back(kNaN); // keep the configured K factor

    table.rows = sweep({cfg.exp.nb_list, cfg.exp.n0_list, k0_axis},
                       [&](const std::vector<double>& point) {
                           Scenario scn = cfg.scn;
                           scn.bs.n = static_cast<int>(point[0]);
                           scn.veh_legit.n = static_cast<int>(point[1]);
                           double k0_db = point[2];
                           if (std::isnan(k0_db)) {
                               k0_db = scn.legit_chan.pure_los
                                           ? kNaN
                                           : linear_to_db(scn.legit_chan.k_factor);
                           } else {
                               scn.legit_chan.k_factor = db_to_linear(k0_db);
                               scn.legit_chan.pure_los = false;
                           }
                           const double theta1 = resolve_theta1(cfg, scn);
                           const double kl = min_kl_at(scn, theta1);
                           const RatePair rates = rates_from_kl(kl, lambda);
                           std::vector<double> row{point[0],
                                                   point[1],
                                                   k0_db,
                                                   theta1,
                                                   kl,
                                                   lambda,
                                                   total_error(rates, cfg.prior_legit),
                                                   kNaN,
                                                   kNaN,
                                                   kNaN};
                           if (cfg.exp.trials > 0) {
                               const EmpiricalReport rep =
                                   run_single_slot(scn, theta1, lambda, trial_config(cfg));
                               row[7] = rep.alpha_hat.value;
                               row[8] = rep.beta_hat.value;
                               row[9] = rep.total_error_hat;
                           }
                           return row;
                       });
    return table;
}

ExperimentTable min_antennas_grid_experiment(const ParsedConfig& cfg) {
    ExperimentTable table;
    table.columns = {"k1_db", "sigma1_db", "n1_star"};
    table.rows = sweep({cfg.exp.k1_db_list, cfg.exp.sigma1_db_list},
                       [&](const std::vector<double>& point) {
                           Scenario scn = cfg.scn;
                           scn.mal_chan.k_factor = db_to_linear(point[0]);
                           scn.mal_chan.noise_var = db_to_linear(point[1]);
                           double n1 = kNaN;
                           try {
                               n1 = static_cast<double>(min_antennas(scn));
                           } catch (const UnboundedAntennas&) {
                           } catch (const InfeasibleAttack&) {
                           }
                           return std::vector<double>{point[0], point[1], n1};
                       });
    return table;
}

ExperimentTable track_experiment(const ParsedConfig& cfg) {
    ExperimentTable table;
    table.columns = {"t",        "d_track",       "alpha_analytic", "beta_analytic",
                     "total_error_analytic", "alpha_mc", "beta_mc",
                     "alpha_se", "beta_se",       "total_error_mc"};
    const double lambda = resolve_lambda(cfg);
    const Trajectory traj =
        cfg.track.radial_road
            ? make_trajectory(cfg.scn.claimed, cfg.track.speed_mps, cfg.track.dt,
                              cfg.track.t_count, cfg.scn.legit_chan)
            : make_road_trajectory(cfg.scn.claimed, cfg.track.bearing, cfg.track.speed_mps,
                                   cfg.track.dt, cfg.track.t_count, cfg.scn.legit_chan);

    // One placement pass over the full horizon; the greedy construction is
    // prefix-stable, so window T uses the first T positions.
    const std::vector<PolarPoint> positions =
        attack_positions(traj, cfg.scn, cfg.track.r_u, cfg.track.mode);
    std::vector<double> kl_prefix(positions.size() + 1, 0.0);
    for (std::size_t t = 0; t < positions.size(); ++t)
        kl_prefix[t + 1] =
            kl_prefix[t] + min_kl_at(scenario_at(cfg.scn, traj, t), positions[t].theta);

    for (int t_window = 1; t_window <= cfg.track.t_count; ++t_window) {
        const double d_track = kl_prefix[static_cast<std::size_t>(t_window)];
        const RatePair rates = tracking_rates(d_track, lambda);
        std::vector<double> row{static_cast<double>(t_window),
                                d_track,
                                rates.false_positive,
                                rates.detection,
                                total_error(rates, cfg.prior_legit),
                                kNaN,
                                kNaN,
                                kNaN,
                                kNaN,
                                kNaN};
        if (cfg.exp.trials > 0) {
            TrialConfig tc = trial_config(cfg);
            tc.t_min = t_window;
            tc.t_max = t_window;
            const EmpiricalReport rep =
                run_tracking(traj, cfg.scn, cfg.track.r_u, cfg.track.mode, lambda, tc);
            row[5] = rep.alpha_hat.value;
            row[6] = rep.beta_hat.value;
            row[7] = rep.alpha_hat.std_error;
            row[8] = rep.beta_hat.std_error;
            row[9] = rep.total_error_hat;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void append_cell(std::string& out, double value) {
    if (std::isnan(value))
        return; // empty cell
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "roc", "kl-map", "total-error-grid", "min-antennas-grid", "track", "correlation"};
    return names;
}

ExperimentTable run_experiment(const ParsedConfig& cfg, const std::string& name) {
    if (name == "roc")
        return roc_experiment(cfg);
    if (name == "kl-map")
        return angle_map_experiment(cfg, true);
    if (name == "correlation")
        return angle_map_experiment(cfg, false);
    if (name == "total-error-grid")
        return total_error_grid_experiment(cfg);
    if (name == "min-antennas-grid")
        return min_antennas_grid_experiment(cfg);
    if (name == "track")
        return track_experiment(cfg);
    std::string known;
    for (const std::string& n : experiment_names())
        known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown experiment '" + name + "' (known: " + known + ")");
}

std::string to_csv(const ExperimentTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            append_cell(out, row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void write_csv_file(const ExperimentTable& table, const std::string& path) {
    const std::string csv = to_csv(table);
    if (path == "-") {
        std::cout << csv;
        if (!std::cout)
            throw std::ios_base::failure("cannot write CSV to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::ios_base::failure("cannot open output file '" + path + "'");
    out << csv;
    out.flush();
    if (!out)
        throw std::ios_base::failure("cannot write output file '" + path + "'");
}

} // namespace lvs
