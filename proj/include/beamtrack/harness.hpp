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

// Monte Carlo experiment engine: paired tracker runs over shared
// trajectories and pilot noise, reduced to per-tick ensemble metrics.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beamtrack/array_geometry.hpp"
#include "beamtrack/channel.hpp"
#include "beamtrack/pilot_design.hpp"
#include "beamtrack/trackers.hpp"

namespace beamtrack {

struct RunConfig {
  ArrayConfig array;
  ChannelConfig channel;
  TrajectorySource source;  // its tick is replaced by sim_tick()
  std::vector<TrackerConfig> trackers;
  double duration = 0.1;
  int n_runs = 5000;
  std::uint64_t master_seed = 1;
  std::optional<double> sim_tick_s;  // default: smallest T / n_s
  int metric_substeps = 1;           // metric points per simulation tick
  // Pilots reveal the true angle exactly; the algorithm field is ignored.
  bool ideal_pilots = false;
  int sample_paths = 0;  // runs whose per-tick paths are kept
  int threads = 0;       // 0: BEAMTRACK_THREADS, else hardware concurrency
  double cdf_floor_db = 80.0;  // SNR histogram span below 10 log10(rho)
  double cdf_step_db = 0.05;

  void validate() const;
  double sim_tick() const;
  double metrics_tick() const { return sim_tick() / metric_substeps; }
  SnrConvention snr_convention() const { return channel.snr_convention(); }
};

/// Linear rho for an N-element array under the configured convention.
double snr_normalization(const RunConfig& cfg, int n_elements);

/// Empirical CDF on a fixed grid: p[i] = P(X <= x[i]).
struct Cdf {
  std::vector<double> x;
  std::vector<double> p;
};

struct SamplePath {
  std::size_t run = 0;
  std::vector<double> truth;     // azimuth, rad
  std::vector<double> estimate;  // azimuth, rad (unwrapped)
  std::vector<double> snr;       // linear
  // Dual-plane runs only.
  std::vector<double> truth_elevation;
  std::vector<double> estimate_elevation;
};

struct MetricSeries {
  std::string label;
  double pilot_period = 0.0;
  std::vector<double> mse;       // rad^2 per metric point
  std::vector<double> snr_inst;  // mean linear SNR per metric point
  std::vector<double> rate;      // mean log2(1 + SNR) per metric point
  double mse_avg = 0.0;          // time average of mse
  double snr_avg_db = 0.0;       // 10 log10 of the overall mean SNR
  double avg_rate = 0.0;
  double divergence_fraction = 0.0;
  double kappa_hat = 1.0;        // slope-error to slope variance ratio
  Cdf cdf_snr_db;
  Cdf cdf_rate;
  std::vector<SamplePath> paths;
};

struct ExperimentResult {
  std::vector<double> t;  // metric grid, s
  double rho = 1.0;       // +inf channels report gain (rho taken as 1)
  std::vector<MetricSeries> series;
};

ExperimentResult run_experiment(const RunConfig& cfg);

struct RateSummary {
  double outage_rate = 0.0;
  double avg_rate = 0.0;
  double effective_outage_rate = 0.0;
  double effective_avg_rate = 0.0;
};

RateSummary summarize_rates(const MetricSeries& series, const DesignInputs& d);

/// Thread count after applying BEAMTRACK_THREADS.
int resolve_threads(int requested);

}  // namespace beamtrack
