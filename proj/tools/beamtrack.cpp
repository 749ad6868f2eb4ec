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

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "beamtrack/cli.hpp"

namespace {

std::string preset_listing() {
  std::string text = "\nPresets:\n";
  for (const auto& p : beamtrack::presets()) {
    text += "  " + std::string(p.name);
    text.append(p.name.size() < 22 ? 22 - p.name.size() : 1, ' ');
    text += std::string(p.description) + "\n";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-discrete beam tracking simulator and pilot design calculator",
               "beamtrack"};
  app.footer(preset_listing());
  app.require_subcommand(1);

  beamtrack::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a preset or configured experiment");
  simulate->add_option("--preset", sim.preset, "Named experiment preset");
  simulate->add_option("--config", sim.config, "YAML config; overlays --preset when both given");
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--runs", sim.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  simulate->footer(preset_listing());

  beamtrack::DesignOptions des;
  auto* design = app.add_subcommand("design", "Pilot period design calculator");
  design->add_option("--n-elements", des.n_elements, "Array size N")->capture_default_str();
  design->add_option("--q", des.q, "Rate noise intensity Q (rad^2/s^3)")->capture_default_str();
  design->add_option("--t-lr-ms", des.t_lr_ms, "Beam alignment time T_LR (ms)")
      ->capture_default_str();
  design->add_option("--phi-ref", des.phi_ref, "Reference angle (rad)")->capture_default_str();
  design->add_option("--kappa", des.kappa, "Slope error ratio kappa")->capture_default_str();
  design->add_option("--mu-zeta", des.mu_zeta, "Power loss threshold")->capture_default_str();
  design->add_option("--p-out", des.p_out, "Outage probability")->capture_default_str();
  auto* per_element =
      design->add_option("--snr-per-element-db", des.snr_per_element_db,
                         "Per-element SNR (dB); default 8 when no SNR is given");
  design->add_option("--snr-total-db", des.snr_total_db, "Total SNR rho (dB)")
      ->excludes(per_element);
  design->add_option("--rate-fixed", des.rate_fixed, "Fixed rate R_f (bits/s/Hz)");
  design->add_option("--rate-fraction", des.rate_fraction,
                     "R_f as a fraction of log2(1 + rho) when --rate-fixed is absent")
      ->capture_default_str();
  design->add_option("--t-pilot-symbol-us", des.t_pilot_symbol_us, "Pilot symbol time (us)")
      ->capture_default_str();
  design->add_option("--codebook-levels", des.codebook_levels, "Sweep codebook levels")
      ->capture_default_str();
  design->add_option("--csv", des.csv, "Also write the results as CSV");

  beamtrack::TraceOptions tr;
  auto* trace = app.add_subcommand("trace", "Track a recorded angle trajectory");
  trace->add_option("--trace", tr.trace, "CSV with t_s,phi_rad[,theta_rad]")->required();
  trace->add_option("--config", tr.config, "YAML config for array, channel and trackers");
  trace->add_option("--out", tr.out, "Output directory")->capture_default_str();
  trace->add_option("--seed", tr.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*simulate) return beamtrack::cmd_simulate(sim, std::cout, std::cerr);
  if (*design) return beamtrack::cmd_design(des, std::cout, std::cerr);
  return beamtrack::cmd_trace(tr, std::cout, std::cerr);
}
