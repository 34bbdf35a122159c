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
//
// Micro-benchmarks for the hot paths: steering vectors, the steering
// correlation closed form, the per-angle divergence floor, the attacker's
// beamformer assembly, and Monte Carlo trial throughput.

#include <benchmark/benchmark.h>

#include "lvs/attack.hpp"
#include "lvs/detector.hpp"
#include "lvs/montecarlo.hpp"
#include "lvs/tracking.hpp"

namespace {

// Four-element receive array, broadside claim, 5 dB received SNR.
lvs::Scenario reference_scenario() {
    lvs::Scenario scn;
    const double fc = 5.9e9;
    const double half_wavelength = 0.5 * lvs::kDefaultLightSpeed / fc;
    scn.bs = lvs::ArrayGeometry::ula(4, half_wavelength, fc);
    scn.veh_legit = lvs::ArrayGeometry::ula(3, half_wavelength, fc);
    scn.veh_mal = lvs::ArrayGeometry::ula(12, half_wavelength, fc);
    scn.claimed = lvs::make_polar(50.0, 0.5 * lvs::kPi);
    scn.legit_chan.k_factor = lvs::db_to_linear(1.0);
    scn.legit_chan.noise_var = 1.0;
    scn.legit_chan.path.carrier_hz = fc;
    scn.mal_chan = scn.legit_chan;
    lvs::set_received_power(scn, lvs::db_to_linear(5.0));
    scn.mal_chan.tx_power = 1.0;
    scn.r_l = 10.0;
    return scn;
}

void bm_steering_rx(benchmark::State& state) {
    const auto bs = lvs::ArrayGeometry::ula(static_cast<int>(state.range(0)), 0.0254, 5.9e9);
    double theta = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvs::steering_rx(theta, bs));
        theta += 1e-6;
    }
}
BENCHMARK(bm_steering_rx)->Arg(4)->Arg(16)->Arg(64);

void bm_correlation_mag_sq(benchmark::State& state) {
    const auto bs = lvs::ArrayGeometry::ula(static_cast<int>(state.range(0)), 0.0254, 5.9e9);
    double theta = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvs::correlation_mag_sq(0.5 * lvs::kPi, theta, bs));
        theta += 1e-6;
    }
}
BENCHMARK(bm_correlation_mag_sq)->Arg(4)->Arg(64);

void bm_min_kl_at(benchmark::State& state) {
    const lvs::Scenario scn = reference_scenario();
    double theta = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lvs::min_kl_at(scn, theta));
        theta += 1e-6;
    }
}
BENCHMARK(bm_min_kl_at);

void bm_optimal_theta(benchmark::State& state) {
    lvs::Scenario scn = reference_scenario();
    // Forbid the two perfect-attack angles so the search has real work to do.
    scn.forbidden_angles = {{0.45 * lvs::kPi, 0.55 * lvs::kPi},
                            {-0.55 * lvs::kPi, -0.45 * lvs::kPi}};
    for (auto _ : state)
        benchmark::DoNotOptimize(lvs::optimal_theta(scn));
}
BENCHMARK(bm_optimal_theta)->Unit(benchmark::kMillisecond);

void bm_optimal_beamformer(benchmark::State& state) {
    const lvs::Scenario scn = reference_scenario();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            lvs::optimal_beamformer(scn, scn.claimed.d, 0.4 * lvs::kPi, scn.psi_mal));
}
BENCHMARK(bm_optimal_beamformer);

void bm_single_slot_trials(benchmark::State& state) {
    const lvs::Scenario scn = reference_scenario();
    lvs::TrialConfig cfg;
    cfg.trials = state.range(0);
    cfg.seed = 7;
    cfg.threads = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(lvs::run_single_slot(scn, 0.4 * lvs::kPi, 1.0, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_single_slot_trials)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void bm_track_positions(benchmark::State& state) {
    lvs::Scenario scn = reference_scenario();
    scn.r_l = 100.0;
    const lvs::Trajectory traj =
        lvs::make_road_trajectory(lvs::make_polar(200.0, 0.25 * lvs::kPi), lvs::kPi,
                                  20.0 / 3.6, 0.1, 10, scn.legit_chan);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            lvs::attack_positions(traj, scn, 3.0, lvs::AttackMode::on_road));
}
BENCHMARK(bm_track_positions)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
