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

// Command implementations behind the beamtrack executable. Each returns a
// process exit code: 0 success, 1 runtime failure, 2 usage or config error.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beamtrack {

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view yaml;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

struct SimulateOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> config;  // overlays the preset when both are given
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct DesignOptions {
  int n_elements = 256;
  double q = 1e3;
  double t_lr_ms = 100.0;
  double phi_ref = 1.5707963267948966;
  double kappa = 1.0;
  double mu_zeta = 0.5;
  double p_out = 0.05;
  std::optional<double> snr_per_element_db;
  std::optional<double> snr_total_db;
  std::optional<double> rate_fixed;
  double rate_fraction = 0.5;
  double t_pilot_symbol_us = 1.0;
  int codebook_levels = 2;
  std::optional<std::filesystem::path> csv;
};

int cmd_design(const DesignOptions& opts, std::ostream& out, std::ostream& err);

struct TraceOptions {
  std::filesystem::path trace;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
};

int cmd_trace(const TraceOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace beamtrack
