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

// Experiment configuration files: YAML with unit-suffixed keys, sweeps
// over dotted keys, and a canonical re-emission used as the run manifest.

#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beamtrack/harness.hpp"
#include "beamtrack/pilot_design.hpp"

namespace beamtrack {

enum class ExperimentKind { kMonteCarlo, kIllustrative, kOverheadTable, kEffectiveRate };

std::string to_string(ExperimentKind k);

/// Design-calculator inputs that are not part of the simulated channel.
struct DesignBlock {
  double t_lr = 0.1;                       // s
  double phi_ref = std::numbers::pi / 2;
  double kappa = 1.0;
  double mu_zeta = 0.5;
  double p_out = 0.05;
  std::optional<double> rate_fixed;        // bits/s/Hz; else rate_fraction of log2(1 + rho)
  double rate_fraction = 0.5;
  std::vector<double> t_pilot_symbols{1e-6};  // s; the first is the design default
  int codebook_levels = 2;
  std::vector<std::string> methods{"coherence", "outage"};
};

struct SweepAxis {
  std::string key;                  // dotted path, e.g. array.n_elements
  std::vector<std::string> values;  // scalar text as written
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::kMonteCarlo;
  RunConfig run;
  DesignBlock design;
  std::optional<std::string> trace_path;
  std::vector<SweepAxis> sweeps;
};

/// One point of the sweep grid: its label and the config it resolves to.
struct Variant {
  std::string label;  // empty when there is no sweep
  std::vector<std::pair<std::string, std::string>> assignments;
  ExperimentConfig config;
};

YAML::Node load_yaml_file(const std::filesystem::path& path);
YAML::Node parse_yaml_text(const std::string& text, const std::string& source_name);

/// Recursively overlays `overlay` onto `base` (maps merge, everything else replaces).
YAML::Node merge_yaml(const YAML::Node& base, const YAML::Node& overlay);

ExperimentConfig parse_experiment(const YAML::Node& root);

/// Canonical YAML with SI-unit keys and shortest round-trip numbers;
/// parsing it yields a config that runs identically.
std::string emit_experiment(const ExperimentConfig& cfg);

/// Cartesian product of the sweep axes, first axis varying slowest.
std::vector<Variant> expand_sweeps(const YAML::Node& root);

/// DesignInputs for an N-element array under the config's channel.
DesignInputs design_inputs(const ExperimentConfig& cfg, int n_elements);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace beamtrack
