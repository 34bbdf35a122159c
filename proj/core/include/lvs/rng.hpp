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

#include <complex>
#include <cstdint>
#include <random>

namespace lvs {

// SplitMix64 mixing step; used to derive decorrelated seeds from (master, index).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random stream.  Each Monte Carlo trial owns its own stream so
// results do not depend on scheduling or on the number of worker threads.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Standard normal draw.
    double normal() { return normal_(gen_); }

    // Circularly-symmetric complex normal with unit variance: each part N(0, 1/2).
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re * kInvSqrt2, im * kInvSqrt2};
    }

    // Uniform draw in [0, 1).
    double uniform() { return uniform_(gen_); }

    // Uniform integer in [lo, hi], inclusive.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
        return dist(gen_);
    }

  private:
    static constexpr double kInvSqrt2 = 0.7071067811865475244;

    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Derive the sub-stream for one (trial, channel) pair.  Counter-based, so
// trials can run in any order, on any thread, and still reproduce bit-exactly.
inline RngStream stream_for(std::uint64_t master_seed, std::uint64_t stream_index) {
    std::uint64_t state = master_seed ^ (stream_index * 0xD6E8FEB86659FD93ULL);
    std::uint64_t a = splitmix64(state);
    std::uint64_t b = splitmix64(state);
    return RngStream(a ^ (b << 1));
}

} // namespace lvs
