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

#include "beamtrack/trackers.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "beamtrack/errors.hpp"
#include "beamtrack/log.hpp"

namespace beamtrack {

namespace {

constexpr double kPi = std::numbers::pi;

double phase_distance(double a, double b) {
  const double d = std::remainder(a - b, 2.0 * kPi);
  return std::abs(d);
}

void require_azimuth_only(const ArrayConfig& array, const char* who) {
  if (!array.azimuth_only()) {
    throw UnsupportedGeometry(std::string(who) +
                              " tracks azimuth only; use a ULA or a fixed-elevation UPA");
  }
}

void steer_at_estimate(TrackerState& s) {
  s.beam.azimuth = s.x[0];
  if (s.dual_plane()) s.beam.elevation = s.x[2];
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kEkf: return "EKF";
    case Algorithm::kFbt: return "FBT";
    case Algorithm::kMl: return "ML";
  }
  return "?";
}

std::string to_string(Mode m) { return m == Mode::kDiscrete ? "D" : "CD"; }

std::string TrackerConfig::label() const { return to_string(algorithm) + "_" + to_string(mode); }

void TrackerConfig::validate() const {
  if (n_s < 1) throw ConfigError("tracker " + label() + ": n_s must be >= 1");
  if (!(pilot_period > 0.0)) throw ConfigError("tracker " + label() + ": pilot period must be > 0");
  if (q_assumed && !(*q_assumed >= 0.0)) throw ConfigError("tracker: q_assumed must be >= 0");
  if (rho && !(*rho > 0.0)) throw ConfigError("tracker: rho must be > 0");
  if (p0_angle && !(*p0_angle >= 0.0)) throw ConfigError("tracker: p0_angle must be >= 0");
  if (p0_rate && !(*p0_rate >= 0.0)) throw ConfigError("tracker: p0_rate must be >= 0");
}

TrackerConfig TrackerConfig::resolve(const ChannelConfig& channel, const ArrayConfig& array) const {
  validate();
  TrackerConfig out = *this;
  if (!out.q_assumed) out.q_assumed = channel.q_intensity;
  if (!out.q_assumed_elevation) {
    out.q_assumed_elevation = q_assumed ? *q_assumed : channel.elevation_q();
  }
  if (!out.rho) out.rho = channel.rho(array.n_elements);
  if (!out.p0_angle) out.p0_angle = 1e-6;
  if (!out.p0_rate) out.p0_rate = *out.q_assumed * pilot_period;
  return out;
}

TrackerState initial_state(const TrackerConfig& cfg, const ArrayConfig& array,
                           const AoAState& init) {
  const bool dual = !array.azimuth_only();
  const Eigen::Index n = dual ? 4 : 2;
  TrackerState s;
  s.x = Eigen::VectorXd::Zero(n);
  s.P = Eigen::MatrixXd::Zero(n, n);
  // The discrete model carries no rate, so its rate variance stays zero.
  const double rate_var = cfg.mode == Mode::kDiscrete ? 0.0 : cfg.p0_rate.value();
  s.x[0] = init.azimuth.angle;
  s.P(0, 0) = cfg.p0_angle.value();
  s.P(1, 1) = rate_var;
  if (dual) {
    if (!init.elevation) throw ConfigError("dual-plane tracking needs an initial elevation");
    s.x[2] = init.elevation->angle;
    s.P(2, 2) = cfg.p0_angle.value();
    s.P(3, 3) = rate_var;
  }
  steer_at_estimate(s);
  return s;
}

TrackerState ekf_predict(const TrackerState& state, const TrackerConfig& cfg, double dt) {
  if (!(dt > 0.0)) throw DomainError("ekf_predict: dt must be > 0");
  TrackerState out = state;
  const Eigen::Index n = state.x.size();
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; i += 2) {
    F(i, i + 1) = dt;
    out.x[i] += dt * state.x[i + 1];
  }
  out.P = F * state.P * F.transpose();
  const double dt2 = dt * dt;
  for (Eigen::Index i = 0; i < n; i += 2) {
    const double q = i == 0 ? cfg.q() : cfg.q_elevation();
    out.P(i, i) += q * dt2 * dt / 3.0;
    out.P(i, i + 1) += q * dt2 / 2.0;
    out.P(i + 1, i) += q * dt2 / 2.0;
    out.P(i + 1, i + 1) += q * dt;
  }
  steer_at_estimate(out);
  return out;
}

TrackerState ekf_discrete_inflate(const TrackerState& state, const TrackerConfig& cfg, int k) {
  if (k < 1) throw DomainError("ekf_discrete_inflate: pilot index must be >= 1");
  TrackerState out = state;
  const double T = cfg.pilot_period;
  const double elapsed = static_cast<double>(k - 1) * T;
  for (Eigen::Index i = 0; i < state.x.size(); i += 2) {
    const double q = i == 0 ? cfg.q() : cfg.q_elevation();
    const double rate_var = cfg.p0_rate.value() + q * elapsed;
    out.P(i, i) += T * T * rate_var + q * T * T * T / 3.0;
  }
  return out;
}

TrackerState ekf_update(const TrackerState& state, const TrackerConfig& cfg,
                        const MeasurementSample& y, const ArrayConfig& array) {
  const Eigen::Index n = state.x.size();
  const Angle est = state.estimate();
  const std::complex<double> h = signal_part(array, est, state.beam);
  const auto grad = signal_part_gradient(array, est, state.beam);

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, n);
  H(0, 0) = grad.d_azimuth.real();
  H(1, 0) = grad.d_azimuth.imag();
  if (state.dual_plane()) {
    H(0, 2) = grad.d_elevation.real();
    H(1, 2) = grad.d_elevation.imag();
  }
  const Eigen::Vector2d innovation(y.y.real() - h.real(), y.y.imag() - h.imag());

  const double rho = cfg.snr();
  const double r = std::isinf(rho) ? 0.0 : 1.0 / (2.0 * rho);
  const Eigen::MatrixXd PHt = state.P * H.transpose();
  Eigen::Matrix2d S = H * PHt;
  S.diagonal().array() += r;
  const double scale = std::max(S.trace(), std::numeric_limits<double>::min());
  if (!(S.determinant() > 1e-14 * scale * scale)) {
    S.diagonal().array() += 1e-12;
    warn_once("ekf-singular-innovation",
              "EKF innovation covariance is singular; regularized with 1e-12 I");
  }
  const Eigen::MatrixXd K = PHt * S.inverse();

  TrackerState out = state;
  out.x += K * innovation;
  Eigen::MatrixXd P = (Eigen::MatrixXd::Identity(n, n) - K * H) * state.P;
  out.P = 0.5 * (P + P.transpose());
  steer_at_estimate(out);
  return out;
}

double angle_from_cosine(double c, double reference) {
  const double a = std::acos(std::clamp(c, -1.0, 1.0));
  const double up = a + 2.0 * kPi * std::round((reference - a) / (2.0 * kPi));
  const double down = -a + 2.0 * kPi * std::round((reference + a) / (2.0 * kPi));
  return std::abs(down - reference) < std::abs(up - reference) ? down : up;
}

double fbt_step_size(const ArrayConfig& array) {
  const int n = array.geometry == Geometry::kUla ? array.n_elements : array.side();
  if (n < 2) throw ConfigError("FBT needs at least two elements along the tracked axis");
  return 1.0 / (static_cast<double>(n - 1) * kPi * array.spacing);
}

TrackerState fbt_update(const TrackerState& state, const TrackerConfig&,
                        const MeasurementSample& y, const ArrayConfig& array) {
  require_azimuth_only(array, "FBT");
  const double ref = state.beam.azimuth;
  // Im y is linear in cos(phi) - cos(beam) near alignment, so the
  // recursion runs on the direction cosine.
  const double beta = std::clamp(std::cos(ref) - fbt_step_size(array) * y.y.imag(), -1.0, 1.0);
  TrackerState out = state;
  out.x[0] = angle_from_cosine(beta, ref);
  steer_at_estimate(out);
  return out;
}

MlCandidates ml_candidates(std::complex<double> h_hat, double reference, int n) {
  const double mag = std::abs(h_hat);
  const double nn = static_cast<double>(n);
  double s = mag >= 1.0 ? 0.0 : -(2.0 / (nn * nn)) * std::log(mag);
  MlCandidates c;
  c.offset = std::sqrt(s);
  const double base = std::cos(reference);
  c.cos_plus = std::clamp(base + c.offset, -1.0, 1.0);
  c.cos_minus = std::clamp(base - c.offset, -1.0, 1.0);
  c.angle_plus = angle_from_cosine(c.cos_plus, reference);
  c.angle_minus = angle_from_cosine(c.cos_minus, reference);
  return c;
}

TrackerState ml_update(const TrackerState& state, const TrackerConfig& cfg,
                       const MeasurementSample& y, const ArrayConfig& array) {
  require_azimuth_only(array, "ML");
  const double rho = cfg.snr();
  const std::complex<double> h_hat = std::isinf(rho) ? y.y : y.y * (rho / (rho + 1.0));
  const int n = array.geometry == Geometry::kUla ? array.n_elements : array.side();
  const double ref = state.beam.azimuth;
  const MlCandidates c = ml_candidates(h_hat, ref, n);

  const Angle beam{ref, std::nullopt};
  const double target = std::arg(h_hat);
  const double d_plus =
      phase_distance(std::arg(signal_part(array, Angle{c.angle_plus, std::nullopt}, beam)), target);
  const double d_minus =
      phase_distance(std::arg(signal_part(array, Angle{c.angle_minus, std::nullopt}, beam)), target);

  TrackerState out = state;
  out.x[0] = d_minus < d_plus ? c.angle_minus : c.angle_plus;
  if (cfg.mode == Mode::kContinuousDiscrete) {
    const double T = cfg.pilot_period;
    const double q = cfg.q();
    const double xi = kPi * array.spacing * T * static_cast<double>(n - 1) * std::sin(ref);
    const double den = q * T * xi * xi + (std::isinf(rho) ? 0.0 : 0.5 / rho);
    if (den > 0.0) out.x[1] += q * T * xi * y.y.imag() / den;
  }
  steer_at_estimate(out);
  return out;
}

Tracker::Tracker(const TrackerConfig& resolved, const ArrayConfig& array, const AoAState& init)
    : cfg_(resolved), array_(array), state_(initial_state(resolved, array, init)) {
  if (cfg_.algorithm != Algorithm::kEkf) require_azimuth_only(array_, to_string(cfg_.algorithm).c_str());
  if (cfg_.algorithm == Algorithm::kFbt && cfg_.mode == Mode::kContinuousDiscrete) {
    background_ = state_;
  }
}

void Tracker::predict(double dt) {
  if (cfg_.mode == Mode::kDiscrete) return;
  if (background_) background_ = ekf_predict(*background_, cfg_, dt);
  state_ = ekf_predict(state_, cfg_, dt);
}

void Tracker::update(const MeasurementSample& y) {
  ++pilots_;
  switch (cfg_.algorithm) {
    case Algorithm::kEkf:
      if (cfg_.mode == Mode::kDiscrete) state_ = ekf_discrete_inflate(state_, cfg_, pilots_);
      state_ = ekf_update(state_, cfg_, y, array_);
      break;
    case Algorithm::kFbt:
      if (background_) {
        // The background filter sees the measurement through FBT's beam.
        background_->beam = state_.beam;
        background_ = ekf_update(*background_, cfg_, y, array_);
      }
      state_ = fbt_update(state_, cfg_, y, array_);
      if (background_) state_.x[1] = background_->x[1];
      break;
    case Algorithm::kMl:
      state_ = ml_update(state_, cfg_, y, array_);
      break;
  }
}

Schedule Schedule::make(const TrackerConfig& cfg, double tick) {
  const double ratio = cfg.pilot_period / tick;
  const double whole = std::round(ratio);
  if (whole < 1.0 || std::abs(ratio - whole) > 1e-6 * std::max(1.0, ratio)) {
    throw ConfigError("tracker " + cfg.label() + ": pilot period " +
                      std::to_string(cfg.pilot_period) +
                      " s is not a whole multiple of the simulation tick " + std::to_string(tick) +
                      " s");
  }
  Schedule s;
  s.pilot_ticks = static_cast<std::size_t>(whole);
  s.predict_ticks = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(whole / static_cast<double>(cfg.n_s))));
  return s;
}

std::size_t pilot_count(const TrackerConfig& cfg, double tick, std::size_t ticks) {
  if (ticks == 0) return 0;
  return (ticks - 1) / Schedule::make(cfg, tick).pilot_ticks;
}

void run_tracker(const TrackerConfig& resolved, const ArrayConfig& array,
                 const ChannelConfig& channel, const Trajectory& trajectory, std::size_t ticks,
                 std::span<const std::complex<double>> noise, const TrackVisitor& visit) {
  if (ticks > trajectory.size()) throw ConfigError("trajectory shorter than the tracking run");
  if (trajectory.size() == 0) return;
  const double tick = trajectory.tick();
  const Schedule sched = Schedule::make(resolved, tick);
  const bool cd = resolved.mode == Mode::kContinuousDiscrete;
  const double rho = channel.rho(array.n_elements);

  Tracker tracker(resolved, array, trajectory.at(0));
  std::size_t last_predict = 0;
  for (std::size_t i = 0; i < ticks; ++i) {
    const double t = static_cast<double>(i) * tick;
    const AoAState truth = trajectory.at(i);
    TrackPoint point;
    if (cd && sched.predict_at(i)) {
      tracker.predict(static_cast<double>(i - last_predict) * tick);
      last_predict = i;
    }
    if (sched.pilot_at(i)) {
      const std::size_t k = i / sched.pilot_ticks;
      if (k > noise.size()) throw ConfigError("not enough pilot noise draws for the run");
      const std::complex<double> n = noise[k - 1];
      const std::complex<double> h = array_response(array, truth.angle(), tracker.beam());
      MeasurementSample m{t, observe(h, n, rho), static_cast<int>(k), n};
      tracker.update(m);
      point.pilot = m;
    }
    point.t = t;
    point.truth = truth;
    point.estimate = tracker.state().estimate();
    point.rate_estimate = tracker.rate_estimate();
    point.beam = tracker.beam();
    visit(point, tracker);
  }
}

std::vector<TrackPoint> run_tracker(const TrackerConfig& cfg, const ArrayConfig& array,
                                    const ChannelConfig& channel, const Trajectory& trajectory,
                                    double duration, RandomStream& rng) {
  const TrackerConfig resolved = cfg.resolve(channel, array);
  const std::size_t ticks = ticks_for(duration, trajectory.tick());
  std::vector<std::complex<double>> noise(pilot_count(resolved, trajectory.tick(), ticks));
  for (auto& n : noise) n = rng.complex_normal();
  std::vector<TrackPoint> out;
  out.reserve(ticks);
  run_tracker(resolved, array, channel, trajectory, ticks, noise,
              [&](const TrackPoint& p, const Tracker&) { out.push_back(p); });
  return out;
}

}  // namespace beamtrack
