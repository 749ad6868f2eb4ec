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

#include "beamtrack/pilot_design.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamtrack/errors.hpp"

namespace beamtrack {

namespace {

constexpr double kPi = std::numbers::pi;

double sin_squared(const DesignInputs& d, const char* formula) {
  const double s = std::sin(d.phi_ref);
  if (std::abs(s) < 1e-12) {
    throw DomainError(std::string(formula) + ": sin(phi_ref) = 0 makes the geometry singular");
  }
  return s * s;
}

// N^2 sin^2(phi) kappa Q T_LR: the drift exponent per squared second.
double drift_scale(const DesignInputs& d, const char* formula) {
  const double n = static_cast<double>(d.n_elements);
  return n * n * sin_squared(d, formula) * d.kappa * d.q_intensity * d.t_lr;
}

double variance(double sum, double sum_sq, std::size_t n) {
  const double mean = sum / static_cast<double>(n);
  return std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
}

double kappa_from(double err_var, double rate_var) {
  if (!(rate_var > 0.0)) return 1.0;
  return std::clamp(err_var / rate_var, kKappaFloor, 1.0);
}

}  // namespace

void DesignInputs::validate() const {
  if (n_elements < 1) throw ConfigError("design: n_elements must be >= 1");
  if (!(q_intensity > 0.0)) throw ConfigError("design: q must be > 0");
  if (!(t_lr > 0.0)) throw ConfigError("design: t_lr must be > 0");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("design: kappa must be in (0, 1]");
  if (!(mu_zeta > 0.0 && mu_zeta < 1.0)) throw ConfigError("design: mu_zeta must be in (0, 1)");
  if (!(p_out > 0.0 && p_out < 1.0)) throw DomainError("design: p_out must be in (0, 1)");
  if (!(rho > 0.0)) throw ConfigError("design: rho must be > 0");
  if (!(rate_fixed > 0.0)) throw ConfigError("design: rate_fixed must be > 0");
  if (!(t_pilot_symbol >= 0.0)) throw ConfigError("design: t_pilot_symbol must be >= 0");
  if (codebook_levels < 1) throw ConfigError("design: codebook_levels must be >= 1");
}

DesignInputs DesignInputs::discrete() const {
  DesignInputs d = *this;
  d.kappa = 1.0;
  return d;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double inverse_q_function(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("inverse_q_function: p must be in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double beam_locking_time(const DesignInputs& d) {
  d.validate();
  const double num = 1.0 / (d.mu_zeta * d.mu_zeta) - 1.0;
  return std::sqrt(num / (2.0 * drift_scale(d, "beam_locking_time")));
}

double beam_coherence_time(const DesignInputs& d) { return beam_locking_time(d.discrete()); }

double outage_pilot_period(const DesignInputs& d) {
  d.validate();
  const double threshold = std::exp2(d.rate_fixed) - 1.0;
  if (d.rho < threshold) {
    throw DomainError("outage_pilot_period: rate_fixed exceeds log2(1 + rho) even when aligned");
  }
  const double qi = inverse_q_function(d.p_out / 2.0);
  return std::sqrt(std::log(d.rho / threshold) /
                   (drift_scale(d, "outage_pilot_period") * qi * qi));
}

double expected_power_ratio(const DesignInputs& d, double T) {
  d.validate();
  const double n = static_cast<double>(d.n_elements);
  const double s = std::sin(d.phi_ref);
  const double x = T * n * s;
  return 1.0 / std::sqrt(1.0 + 2.0 * d.kappa * d.q_intensity * d.t_lr * x * x);
}

double snr_cdf(double gamma, const DesignInputs& d, double T) {
  d.validate();
  if (!(gamma > 0.0)) throw DomainError("snr_cdf: gamma must be > 0");
  if (gamma >= d.rho) return 1.0;
  const double c = T * T * drift_scale(d, "snr_cdf");
  if (c == 0.0) return 0.0;
  return 2.0 * q_function(std::sqrt(std::log(d.rho / gamma) / c));
}

double snr_pdf(double gamma, const DesignInputs& d, double T) {
  d.validate();
  if (!(gamma > 0.0)) throw DomainError("snr_pdf: gamma must be > 0");
  if (gamma >= d.rho) return 0.0;
  const double c = T * T * drift_scale(d, "snr_pdf");
  if (c == 0.0) return 0.0;
  const double L = std::log(d.rho / gamma);
  return std::exp(-L / (2.0 * c)) / (gamma * std::sqrt(2.0 * kPi * c * L));
}

double sweep_time(const DesignInputs& d) {
  d.validate();
  const double levels = static_cast<double>(d.codebook_levels);
  return levels * std::pow(kPi * static_cast<double>(d.n_elements), 2.0 / levels) *
         d.t_pilot_symbol;
}

double effective_rate(const DesignInputs& d, double T, double achievable_rate) {
  d.validate();
  if (!(T > d.t_pilot_symbol)) {
    throw DomainError("effective_rate: pilot period must exceed the pilot symbol time");
  }
  return (T - d.t_pilot_symbol) / T * (d.t_lr / (d.t_lr + sweep_time(d))) * achievable_rate;
}

double outage_rate(const DesignInputs& d) { return (1.0 - d.p_out) * d.rate_fixed; }

double max_rate(double rho) { return std::log2(1.0 + rho); }

double overhead_reduction(double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("overhead_reduction: kappa must be in (0, 1]");
  return 1.0 - std::sqrt(kappa);
}

double estimate_kappa(std::span<const double> slope_errors, std::span<const double> true_rates) {
  if (slope_errors.empty() || slope_errors.size() != true_rates.size()) {
    throw ConfigError("estimate_kappa: need matching nonempty series");
  }
  SlopeMoments m;
  for (std::size_t i = 0; i < slope_errors.size(); ++i) {
    m.add(true_rates[i], true_rates[i] - slope_errors[i]);
  }
  return m.kappa();
}

void SlopeMoments::add(double true_rate, double estimated_rate) {
  const double err = true_rate - estimated_rate;
  ++n_;
  err_sum_ += err;
  err_sq_ += err * err;
  rate_sum_ += true_rate;
  rate_sq_ += true_rate * true_rate;
}

void SlopeMoments::merge(const SlopeMoments& other) {
  n_ += other.n_;
  err_sum_ += other.err_sum_;
  err_sq_ += other.err_sq_;
  rate_sum_ += other.rate_sum_;
  rate_sq_ += other.rate_sq_;
}

double SlopeMoments::kappa() const {
  if (n_ == 0) return 1.0;
  return kappa_from(variance(err_sum_, err_sq_, n_), variance(rate_sum_, rate_sq_, n_));
}

}  // namespace beamtrack
