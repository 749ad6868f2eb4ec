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

// EKF, FBT and ML beam trackers in discrete and continuous-discrete form.

#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beamtrack/array_geometry.hpp"
#include "beamtrack/channel.hpp"

namespace beamtrack {

enum class Algorithm { kEkf, kFbt, kMl };
enum class Mode { kDiscrete, kContinuousDiscrete };

struct TrackerConfig {
  Algorithm algorithm = Algorithm::kEkf;
  Mode mode = Mode::kContinuousDiscrete;
  int n_s = 10;                 // predictions per pilot period (CD only)
  double pilot_period = 1e-3;   // seconds
  // Unset fields are filled from the channel by resolve().
  std::optional<double> q_assumed;
  std::optional<double> q_assumed_elevation;
  std::optional<double> rho;
  std::optional<double> p0_angle;  // rad^2
  std::optional<double> p0_rate;   // (rad/s)^2

  void validate() const;
  /// Copy with every optional filled: Q and rho from the channel,
  /// P0 = diag(1e-6, Q*T).
  TrackerConfig resolve(const ChannelConfig& channel, const ArrayConfig& array) const;
  /// "EKF_CD", "ML_D", ...
  std::string label() const;

  double q() const { return q_assumed.value(); }
  double q_elevation() const { return q_assumed_elevation.value_or(q()); }
  double snr() const { return rho.value(); }
};

std::string to_string(Algorithm a);
std::string to_string(Mode m);

/// x = [phi, phidot] or [phi, phidot, theta, thetadot]; P matches x.
struct TrackerState {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
  Angle beam;

  bool dual_plane() const { return x.size() == 4; }
  Angle estimate() const {
    Angle a{x[0], std::nullopt};
    if (dual_plane()) a.elevation = x[2];
    return a;
  }
};

/// Filter state at time zero: known initial angle, zero rate estimate.
TrackerState initial_state(const TrackerConfig& cfg, const ArrayConfig& array,
                           const AoAState& init);

/// Exact discretization of the constant-rate model over dt; steers the
/// beam at the new prediction.
TrackerState ekf_predict(const TrackerState& state, const TrackerConfig& cfg, double dt);

/// Discrete EKF between pilots: the angle is a random walk whose step
/// variance grows with the accumulated rate uncertainty. `k` is the
/// 1-based index of the pilot about to be processed.
TrackerState ekf_discrete_inflate(const TrackerState& state, const TrackerConfig& cfg, int k);

TrackerState ekf_update(const TrackerState& state, const TrackerConfig& cfg,
                        const MeasurementSample& y, const ArrayConfig& array);

/// 1/((N-1) pi Delta) with N elements along the tracked axis.
double fbt_step_size(const ArrayConfig& array);

TrackerState fbt_update(const TrackerState& state, const TrackerConfig& cfg,
                        const MeasurementSample& y, const ArrayConfig& array);

TrackerState ml_update(const TrackerState& state, const TrackerConfig& cfg,
                       const MeasurementSample& y, const ArrayConfig& array);

/// The two angle hypotheses consistent with a shrunk observation h_hat
/// taken with the beam at `reference`.
struct MlCandidates {
  double offset = 0.0;     // |cos(phi) - cos(reference)| implied by |h_hat|
  double cos_plus = 0.0;   // clamped arccos arguments
  double cos_minus = 0.0;
  double angle_plus = 0.0;
  double angle_minus = 0.0;
};

MlCandidates ml_candidates(std::complex<double> h_hat, double reference, int n);

/// The angle with cosine `c` nearest to `reference` (any branch, unwrapped).
double angle_from_cosine(double c, double reference);

/// Stateful tracker combining predict/update for one algorithm and mode.
class Tracker {
 public:
  Tracker(const TrackerConfig& resolved, const ArrayConfig& array, const AoAState& init);

  /// Continuous-discrete prediction over dt; a no-op in discrete mode.
  void predict(double dt);
  void update(const MeasurementSample& y);

  const TrackerConfig& config() const { return cfg_; }
  const TrackerState& state() const { return state_; }
  const Angle& beam() const { return state_.beam; }
  double azimuth_estimate() const { return state_.x[0]; }
  double rate_estimate() const { return state_.x[1]; }
  int pilots_seen() const { return pilots_; }

 private:
  TrackerConfig cfg_;
  ArrayConfig array_;
  TrackerState state_;
  std::optional<TrackerState> background_;  // FBT_CD rate estimator
  int pilots_ = 0;
};

/// One tick of a tracker run.
struct TrackPoint {
  double t = 0.0;
  AoAState truth;
  Angle estimate;
  double rate_estimate = 0.0;
  Angle beam;
  std::optional<MeasurementSample> pilot;  // set on ticks carrying a pilot
};

/// Tick schedule shared by every tracker driven on a trajectory grid.
struct Schedule {
  std::size_t pilot_ticks = 0;    // simulation ticks per pilot period
  std::size_t predict_ticks = 0;  // ticks between CD predictions

  static Schedule make(const TrackerConfig& cfg, double tick);
  bool pilot_at(std::size_t i) const { return i > 0 && i % pilot_ticks == 0; }
  bool predict_at(std::size_t i) const {
    return i > 0 && (i % predict_ticks == 0 || pilot_at(i));
  }
};

/// Number of pilots in [0, duration].
std::size_t pilot_count(const TrackerConfig& cfg, double tick, std::size_t ticks);

using TrackVisitor = std::function<void(const TrackPoint&, const Tracker&)>;

/// Drives one tracker over ticks [0, ticks) of `trajectory`. `noise[k-1]`
/// is the CN(0,1) draw for pilot k, so trackers given the same span see
/// the same noise.
void run_tracker(const TrackerConfig& resolved, const ArrayConfig& array,
                 const ChannelConfig& channel, const Trajectory& trajectory, std::size_t ticks,
                 std::span<const std::complex<double>> noise, const TrackVisitor& visit);

/// Convenience form drawing pilot noise from `rng` and collecting every tick.
std::vector<TrackPoint> run_tracker(const TrackerConfig& cfg, const ArrayConfig& array,
                                    const ChannelConfig& channel, const Trajectory& trajectory,
                                    double duration, RandomStream& rng);

}  // namespace beamtrack
