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

// Ground-truth angle-of-arrival dynamics and normalized pilot observations.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "beamtrack/array_geometry.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

struct PlaneState {
  double angle = 0.0;  // rad
  double rate = 0.0;   // rad/s
};

/// True or estimated AoA: azimuth and, for dual-plane arrays, elevation.
struct AoAState {
  PlaneState azimuth;
  std::optional<PlaneState> elevation;

  Angle angle() const {
    Angle a{azimuth.angle, std::nullopt};
    if (elevation) a.elevation = elevation->angle;
    return a;
  }
};

enum class SnrConvention { kTotalFixed, kPerElementFixed };

struct ChannelConfig {
  double q_intensity = 1e4;  // rad^2/s^3, PSD of the white process driving the rate
  double phi0 = std::numbers::pi / 2;
  double phidot_init = 0.0;
  // Exactly one of these is set. +inf requests a noiseless channel.
  std::optional<double> snr_total_db;
  std::optional<double> snr_per_element_db;
  // Elevation dynamics; setting theta0 enables a second Brownian plane.
  std::optional<double> theta0;
  double thetadot_init = 0.0;
  std::optional<double> q_elevation;  // defaults to q_intensity

  void validate() const;
  SnrConvention snr_convention() const;
  /// Linear SNR including array gain for an N-element array.
  double rho(int n_elements) const;
  double elevation_q() const { return q_elevation.value_or(q_intensity); }
};

/// Converts decibels to a linear ratio; +inf maps to +inf.
double db_to_linear(double db);

struct BrownianRate {};

struct ConstantRate {
  double speed_m_s = 0.0;
  double range_m = 1.0;
};

/// Externally supplied trajectory samples (times relative to the first row).
struct TraceData {
  std::vector<double> t;
  std::vector<double> phi;
  std::vector<double> theta;  // empty for azimuth-only traces
  std::string source;

  bool has_elevation() const { return !theta.empty(); }
  double span() const { return t.empty() ? 0.0 : t.back() - t.front(); }
};

struct TrajectorySource {
  std::variant<BrownianRate, ConstantRate, TraceData> kind = BrownianRate{};
  double tick = 1e-4;  // simulation step, seconds

  void validate() const;
};

/// Sampled ground truth on a uniform tick grid. Between grid points the
/// angle is linear in time and the rate is held, which is exactly the
/// Euler-Maruyama path.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(double tick, std::vector<double> phi, std::vector<double> phidot,
             std::vector<double> theta = {}, std::vector<double> thetadot = {});

  double tick() const { return tick_; }
  std::size_t size() const { return phi_.size(); }
  double duration() const { return size() < 2 ? 0.0 : tick_ * static_cast<double>(size() - 1); }
  bool has_elevation() const { return !theta_.empty(); }

  AoAState at(std::size_t i) const;
  /// State at tick i plus `frac` of one tick (0 <= frac < 1).
  AoAState at(std::size_t i, double frac) const;

  const std::vector<double>& phi() const { return phi_; }
  const std::vector<double>& phidot() const { return phidot_; }

 private:
  double tick_ = 0.0;
  std::vector<double> phi_, phidot_, theta_, thetadot_;
};

/// Number of whole ticks covering `duration` (rounded to the nearest tick).
std::size_t ticks_for(double duration, double tick);

Trajectory gen_trajectory(const ChannelConfig& cfg, const TrajectorySource& src, double duration,
                          RandomStream& rng);
Trajectory gen_trajectory(const ChannelConfig& cfg, const TrajectorySource& src, double duration,
                          std::uint64_t seed);

/// One normalized pilot observation y_k = h + n_k / sqrt(rho).
struct MeasurementSample {
  double t = 0.0;
  std::complex<double> y;
  int k = 0;
  std::complex<double> noise;  // the CN(0, 1) draw n_k behind y
};

/// Adds scaled noise to a noiseless response; rho = +inf returns h unchanged.
std::complex<double> observe(std::complex<double> h, std::complex<double> noise, double rho);

MeasurementSample measure(const ChannelConfig& cfg, const ArrayConfig& array, const AoAState& truth,
                          const Angle& beam, RandomStream& rng, double t = 0.0, int k = 0);

/// Reads a `t_s,phi_rad[,theta_rad]` CSV with strictly increasing times.
TraceData ingest_trace(const std::filesystem::path& path);
TraceData parse_trace(std::istream& in, const std::string& source_name);

}  // namespace beamtrack
