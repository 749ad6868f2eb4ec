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

// Closed-form pilot-period design: coherence and locking times, outage
// periods, the drift-induced SNR law, sweep time and effective rate.

#pragma once

#include <cstddef>
#include <numbers>
#include <span>

namespace beamtrack {

struct DesignInputs {
  int n_elements = 256;
  double q_intensity = 1e3;          // rad^2/s^3
  double t_lr = 0.1;                 // link reestablishment interval, s
  double phi_ref = std::numbers::pi / 2;
  double kappa = 1.0;                // 1 = discrete tracking
  double mu_zeta = 0.5;              // target mean power ratio
  double p_out = 0.05;
  double rho = 1.0;                  // linear SNR including array gain
  double rate_fixed = 1.0;           // bits/s/Hz
  double t_pilot_symbol = 1e-6;      // s
  int codebook_levels = 2;

  void validate() const;
  /// Same inputs with kappa = 1.
  DesignInputs discrete() const;
};

inline constexpr double kKappaFloor = 1e-4;

/// Gaussian tail probability P(Z > x).
double q_function(double x);
/// Inverse of q_function on (0, 1).
double inverse_q_function(double p);

/// Time for the mean power ratio to fall to mu_zeta; with kappa = 1 this is
/// the discrete beam coherence time.
double beam_locking_time(const DesignInputs& d);
double beam_coherence_time(const DesignInputs& d);

/// Pilot period keeping P(rate < rate_fixed) at p_out.
double outage_pilot_period(const DesignInputs& d);

/// Mean power ratio after holding a beam for T seconds.
double expected_power_ratio(const DesignInputs& d, double T);

/// Distribution of the SNR reached T seconds after the last pilot.
double snr_cdf(double gamma, const DesignInputs& d, double T);
double snr_pdf(double gamma, const DesignInputs& d, double T);

double sweep_time(const DesignInputs& d);
double effective_rate(const DesignInputs& d, double T, double achievable_rate);
double outage_rate(const DesignInputs& d);
double max_rate(double rho);

/// Fraction of pilots saved by continuous-discrete tracking: 1 - sqrt(kappa).
double overhead_reduction(double kappa);

/// Var(rate error) / Var(rate), clamped to [kKappaFloor, 1]; 1 when the
/// true rate has no spread.
double estimate_kappa(std::span<const double> slope_errors, std::span<const double> true_rates);

/// Streaming form of estimate_kappa; merge() is order-sensitive only
/// through floating-point rounding, so merge in a fixed order.
class SlopeMoments {
 public:
  void add(double true_rate, double estimated_rate);
  void merge(const SlopeMoments& other);
  std::size_t count() const { return n_; }
  double kappa() const;

 private:
  std::size_t n_ = 0;
  double err_sum_ = 0.0, err_sq_ = 0.0, rate_sum_ = 0.0, rate_sq_ = 0.0;
};

}  // namespace beamtrack
