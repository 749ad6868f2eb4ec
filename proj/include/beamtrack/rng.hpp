// SPDX-License-Identifier: Apache-2.0
//
// beamtrack: continuous-discrete beam tracking for mobile mmWave receivers
// Copyright (C) 2026 The beamtrack authors
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

namespace beamtrack {

/// Purpose tags for streams derived from one Monte Carlo run.
enum class StreamPurpose : std::uint64_t { kTrajectory = 1, kMeasurementNoise = 2 };

/// SplitMix64 finalizer; used to derive well-separated seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic Gaussian source. Independent streams are split off a master
/// seed by hashing (master_seed, run_index, purpose) through SplitMix64 and
/// seeding a 64-bit Mersenne Twister with the result.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  static RandomStream derive(std::uint64_t master_seed, std::uint64_t run_index,
                             StreamPurpose purpose) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ splitmix64(run_index + 0x632BE59BD9B4E019ULL));
    s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
    return RandomStream(s);
  }

  double normal() { return normal_(engine_); }

  /// Circularly symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * kInvSqrt2, im * kInvSqrt2};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  static constexpr double kInvSqrt2 = 0.70710678118654752440;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace beamtrack
