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

#include "beamtrack/cli.hpp"

namespace beamtrack {

namespace {

constexpr std::string_view kFig2 = R"(name: fig2-illustrative
kind: illustrative
runs: 1
duration_ms: 100
sim_tick_us: 100
array: {geometry: ula, n_elements: 64}
channel: {q_rad2_s3: 0, phi0_rad: 0.7853981633974483, snr_total_db: .inf}
trajectory: {kind: constant_rate, speed_km_h: 100, range_m: 20}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 10}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 10}
sweep:
  trackers.pilot_period_ms: [10, 50]
)";

constexpr std::string_view kFig6 = R"(name: fig6-aoa-tracking
kind: monte_carlo
runs: 100
sample_paths: 1
duration_ms: 100
array: {geometry: ula, n_elements: 64}
channel: {q_rad2_s3: 1e4, phi0_rad: 1.5707963267948966, snr_total_db: 20}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 1}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 1}
  - {algorithm: fbt, mode: d, pilot_period_ms: 1}
  - {algorithm: fbt, mode: cd, pilot_period_ms: 1}
  - {algorithm: ml, mode: d, pilot_period_ms: 1}
  - {algorithm: ml, mode: cd, pilot_period_ms: 1}
)";

constexpr std::string_view kFig7 = R"(name: fig7-mse-array
kind: monte_carlo
runs: 500
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e4, phi0_rad: 1.5707963267948966, snr_total_db: 20}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 1}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 1}
  - {algorithm: fbt, mode: d, pilot_period_ms: 1}
  - {algorithm: fbt, mode: cd, pilot_period_ms: 1}
  - {algorithm: ml, mode: d, pilot_period_ms: 1}
  - {algorithm: ml, mode: cd, pilot_period_ms: 1}
sweep:
  array.n_elements: [4, 16, 64, 256]
)";

constexpr std::string_view kFig8 = R"(name: fig8-snr-vs-T
kind: monte_carlo
runs: 500
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e4, phi0_rad: 1.5707963267948966, snr_total_db: 20}
trackers:
  - {algorithm: ekf, mode: d}
  - {algorithm: ekf, mode: cd}
  - {algorithm: fbt, mode: d}
  - {algorithm: fbt, mode: cd}
sweep:
  array.n_elements: [16, 64]
  trackers.pilot_period_ms: [0.5, 1, 2.5, 5]
)";

constexpr std::string_view kFig9 = R"(name: fig9-snr-array-gain
kind: monte_carlo
runs: 500
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e4, phi0_rad: 1.5707963267948966, snr_per_element_db: 16}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 1}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 1}
  - {algorithm: fbt, mode: d, pilot_period_ms: 1}
  - {algorithm: fbt, mode: cd, pilot_period_ms: 1}
sweep:
  array.n_elements: [4, 16, 64, 256, 1024]
)";

constexpr std::string_view kFig10 = R"(name: fig10-upa
kind: monte_carlo
runs: 500
duration_ms: 100
array: {geometry: upa}
channel:
  q_rad2_s3: 1e4
  phi0_rad: 1.5707963267948966
  theta0_rad: 1.5707963267948966
  snr_total_db: 20
trackers:
  - {algorithm: ekf, mode: d}
  - {algorithm: ekf, mode: cd}
sweep:
  array.n_elements: [16, 64, 256]
  trackers.pilot_period_ms: [1, 2.5]
)";

constexpr std::string_view kTable1 = R"(name: table1-overhead
kind: overhead_table
runs: 200
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e3, phi0_rad: 1.5707963267948966, snr_per_element_db: 8}
trackers:
  - {algorithm: ml, mode: cd, n_s: 10}
design:
  t_lr_ms: 100
  mu_zeta: 0.5
  p_out: 0.05
  rate_fraction: 0.5
  methods: [coherence, outage]
sweep:
  array.n_elements: [4, 16, 64, 256, 1024]
)";

constexpr std::string_view kFig11 = R"(name: fig11-cdf-snr
kind: monte_carlo
runs: 500
duration_ms: 100
sim_tick_us: 10
array: {geometry: ula, n_elements: 256}
channel: {q_rad2_s3: 1e3, phi0_rad: 1.5707963267948966, snr_per_element_db: 8}
trackers:
  - {algorithm: ml, mode: d, pilot_period_ms: 0.5}
  - {algorithm: ml, mode: cd, pilot_period_ms: 1.43}
)";

constexpr std::string_view kFig13 = R"(name: fig13-quantization
kind: monte_carlo
runs: 200
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e4, phi0_rad: 1.5707963267948966, snr_total_db: 20}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 1}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 1}
  - {algorithm: fbt, mode: d, pilot_period_ms: 1}
  - {algorithm: fbt, mode: cd, pilot_period_ms: 1}
  - {algorithm: ml, mode: d, pilot_period_ms: 1}
  - {algorithm: ml, mode: cd, pilot_period_ms: 1}
sweep:
  array.n_elements: [4, 64]
  array.phase_bits: [1, 2, 3, 4, 5, 6]
)";

constexpr std::string_view kFig14 = R"(name: fig14-effective-rate
kind: effective_rate
runs: 200
duration_ms: 100
array: {geometry: ula}
channel: {q_rad2_s3: 1e3, phi0_rad: 1.5707963267948966, snr_per_element_db: 8}
trackers:
  - {algorithm: ml, mode: cd, n_s: 10}
design:
  t_lr_ms: 100
  p_out: 0.05
  rate_fraction: 0.5
  codebook_levels: 2
  t_pilot_symbol_us: [1, 5, 10, 20, 40]
sweep:
  array.n_elements: [64, 256, 1024]
)";

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list{
      {"fig2-illustrative", "noiseless ideal-pilot SNR, D vs CD, T = 10 and 50 ms", kFig2},
      {"fig6-aoa-tracking", "sample AoA path and estimates for all six trackers", kFig6},
      {"fig7-mse-array", "MSE over time versus array size, all six trackers", kFig7},
      {"fig8-snr-vs-T", "average SNR versus pilot period at fixed total SNR", kFig8},
      {"fig9-snr-array-gain", "average SNR versus array size at 16 dB per element", kFig9},
      {"fig10-upa", "dual-plane UPA tracking versus array size and pilot period", kFig10},
      {"table1-overhead", "pilot overhead reduction per design method and array size", kTable1},
      {"fig11-cdf-snr", "SNR CDF of ML_D and ML_CD at outage-designed periods", kFig11},
      {"fig13-quantization", "average SNR versus phase-shifter resolution", kFig13},
      {"fig14-effective-rate", "effective rate versus pilot symbol time", kFig14},
  };
  return list;
}

const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace beamtrack
