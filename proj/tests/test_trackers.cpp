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

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "beamtrack/trackers.hpp"
#include "oracles.hpp"

using namespace beamtrack;
using bt_test::kPi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ArrayConfig ula(int n) {
  ArrayConfig a;
  a.n_elements = n;
  return a;
}

TrackerConfig tracker(Algorithm alg, Mode mode, double q, double rho, double T = 1e-3) {
  TrackerConfig c;
  c.algorithm = alg;
  c.mode = mode;
  c.pilot_period = T;
  c.q_assumed = q;
  c.rho = rho;
  c.p0_angle = 1e-6;
  c.p0_rate = q * T;
  return c;
}

TrackerState state2(double phi, double rate, const Eigen::Matrix2d& P) {
  TrackerState s;
  s.x = Eigen::Vector2d(phi, rate);
  s.P = P;
  s.beam = Angle{phi, std::nullopt};
  return s;
}

MeasurementSample sample(std::complex<double> y) {
  MeasurementSample m;
  m.y = y;
  m.k = 1;
  return m;
}

double min_eigen(const Eigen::MatrixXd& P) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P).eigenvalues().minCoeff();
}

}  // namespace

TEST_SUITE("trackers") {

TEST_CASE("prediction: fixed point and linear drift") {
  const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 0.0, 100.0);
  const auto s0 = state2(1.0, 0.0, Eigen::Matrix2d::Zero());
  const auto s1 = ekf_predict(s0, cfg, 1e-3);
  CHECK(s1.x == s0.x);
  CHECK(s1.P == s0.P);
  const auto s2 = ekf_predict(state2(1.0, 2.0, Eigen::Matrix2d::Zero()), cfg, 1e-3);
  CHECK(s2.x[0] == doctest::Approx(1.002).epsilon(1e-15));
  CHECK(s2.x[1] == 2.0);
  CHECK(s2.beam.azimuth == s2.x[0]);
}

TEST_CASE("prediction covariance equals F P F^T + Q_d") {
  const double q = 3e3, dt = 2e-4;
  const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, q, 100.0);
  Eigen::Matrix2d P;
  P << 2e-3, 1e-2, 1e-2, 4.0;
  const auto out = ekf_predict(state2(0.5, 1.0, P), cfg, dt);
  const double p00 = P(0, 0) + 2 * dt * P(0, 1) + dt * dt * P(1, 1) + q * dt * dt * dt / 3;
  const double p01 = P(0, 1) + dt * P(1, 1) + q * dt * dt / 2;
  const double p11 = P(1, 1) + q * dt;
  CHECK(out.P(0, 0) == doctest::Approx(p00).epsilon(1e-14));
  CHECK(out.P(0, 1) == doctest::Approx(p01).epsilon(1e-14));
  CHECK(out.P(1, 0) == doctest::Approx(p01).epsilon(1e-14));
  CHECK(out.P(1, 1) == doctest::Approx(p11).epsilon(1e-14));
}

TEST_CASE("prediction is a semigroup: two half steps equal one step") {
  bt_test::Gen g(21);
  for (int i = 0; i < 500; ++i) {
    const double q = g.log_uniform(1.0, 1e5);
    const double dt = g.log_uniform(1e-5, 1e-2);
    const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, q, 100.0);
    Eigen::Matrix2d A = Eigen::Matrix2d::Random();
    Eigen::Matrix2d P = A * A.transpose();
    const auto s = state2(g.uniform(0, kPi), g.normal(), P);
    const auto one = ekf_predict(s, cfg, dt);
    const auto two = ekf_predict(ekf_predict(s, cfg, dt / 2), cfg, dt / 2);
    CHECK((one.P - two.P).norm() <= 1e-12 * one.P.norm());
    CHECK(std::abs(one.x[0] - two.x[0]) <= 1e-12 * std::abs(one.x[0]));
  }
}

TEST_CASE("dual-plane prediction is block diagonal") {
  auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 1e3, 100.0);
  cfg.q_assumed_elevation = 5e2;
  TrackerState s;
  s.x = Eigen::Vector4d(1.0, 2.0, 1.5, -1.0);
  s.P = Eigen::Matrix4d::Identity() * 1e-3;
  s.beam = Angle{1.0, 1.5};
  const auto out = ekf_predict(s, cfg, 1e-3);
  CHECK(out.x[2] == doctest::Approx(1.499));
  CHECK(out.beam.elevation.value() == out.x[2]);
  CHECK(out.P(0, 2) == 0.0);
  CHECK(out.P(1, 3) == 0.0);
  CHECK(out.P(3, 3) == doctest::Approx(1e-3 + 5e2 * 1e-3));
}

TEST_CASE("update: no innovation leaves the state alone") {
  const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 1e4, kInf);
  Eigen::Matrix2d P;
  P << 1e-4, 1e-3, 1e-3, 10.0;
  const auto s = state2(1.2, 3.0, P);
  const auto out = ekf_update(s, cfg, sample(1.0), ula(16));
  CHECK(out.x[0] == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(out.x[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("update: zero covariance means zero gain") {
  const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 1e4, 100.0);
  const auto s = state2(1.2, 3.0, Eigen::Matrix2d::Zero());
  const auto out = ekf_update(s, cfg, sample({0.3, -0.4}), ula(16));
  CHECK(out.x == s.x);
  CHECK(out.P.norm() == 0.0);
}

TEST_CASE("update matches the information-form Kalman oracle") {
  bt_test::Gen g(22);
  for (int i = 0; i < 300; ++i) {
    const int n = g.integer(2, 64);
    const double rho = g.log_uniform(1.0, 1e4);
    const auto cfg = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 1e4, rho);
    const double a = g.log_uniform(1e-8, 1e-4), b = g.log_uniform(1e-2, 10.0);
    const double c = g.uniform(-0.9, 0.9) * std::sqrt(a * b);
    Eigen::Matrix2d P;
    P << a, c, c, b;
    const double phi = g.uniform(0.2, kPi - 0.2);
    TrackerState s = state2(phi, g.normal(), P);
    s.beam.azimuth = phi + g.uniform(-0.5, 0.5) / n;
    const std::complex<double> y(g.uniform(-1, 1), g.uniform(-1, 1));

    const ArrayConfig arr = ula(n);
    const auto h = signal_part(arr, s.estimate(), s.beam);
    const auto grad = signal_part_gradient(arr, s.estimate(), s.beam).d_azimuth;
    const double H[2][2] = {{grad.real(), 0.0}, {grad.imag(), 0.0}};
    const double x[2] = {s.x[0], s.x[1]};
    const double Pa[2][2] = {{a, c}, {c, b}};
    const double innov[2] = {y.real() - h.real(), y.imag() - h.imag()};
    const auto ref = bt_test::information_update(x, Pa, H, 1.0 / (2.0 * rho), innov);

    const auto out = ekf_update(s, cfg, sample(y), arr);
    CHECK(std::abs(out.x[0] - ref.x[0]) <= 1e-10 * std::max(1.0, std::abs(ref.x[0])));
    CHECK(std::abs(out.x[1] - ref.x[1]) <= 1e-10 * std::max(1.0, std::abs(ref.x[1])));
    for (int r = 0; r < 2; ++r) {
      for (int q = 0; q < 2; ++q) {
        CHECK(std::abs(out.P(r, q) - ref.P[r][q]) <= 1e-10 * std::abs(b) + 1e-18);
      }
    }
  }
}

TEST_CASE("discrete inflation adds the drift accumulated over one period") {
  const double q = 1e4, T = 1e-3;
  const auto cfg = tracker(Algorithm::kEkf, Mode::kDiscrete, q, 100.0, T);
  const auto s = state2(1.0, 0.0, Eigen::Matrix2d::Zero());
  for (int k : {1, 2, 10}) {
    const auto out = ekf_discrete_inflate(s, cfg, k);
    const double rate_var = q * T + q * (k - 1) * T;
    CHECK(out.P(0, 0) == doctest::Approx(T * T * rate_var + q * T * T * T / 3).epsilon(1e-14));
    CHECK(out.P(1, 1) == 0.0);
  }
  CHECK_THROWS_AS(ekf_discrete_inflate(s, cfg, 0), DomainError);
}

TEST_CASE("FBT step size and recursion") {
  CHECK(fbt_step_size(ula(64)) == doctest::Approx(1.0105e-2).epsilon(1e-4));
  CHECK(fbt_step_size(ula(64)) == doctest::Approx(1.0 / (63 * kPi * 0.5)).epsilon(1e-15));
  const auto cfg = tracker(Algorithm::kFbt, Mode::kDiscrete, 1e4, 100.0);
  const auto s = state2(1.3, 0.0, Eigen::Matrix2d::Zero());
  CHECK(fbt_update(s, cfg, sample({0.9, 0.0}), ula(64)).x[0] == doctest::Approx(1.3).epsilon(1e-14));

  // cos(beam) = 0.999 and a step of +0.01 saturates at 1.
  const auto near_endfire = state2(std::acos(0.999), 0.0, Eigen::Matrix2d::Zero());
  const double im = -0.01 / fbt_step_size(ula(64));
  const auto out = fbt_update(near_endfire, cfg, sample({0.0, im}), ula(64));
  CHECK(std::cos(out.x[0]) == doctest::Approx(1.0));
  CHECK(out.x[0] == doctest::Approx(0.0));
}

TEST_CASE("FBT and ML reject dual-plane arrays") {
  ArrayConfig a;
  a.geometry = Geometry::kUpa;
  a.n_elements = 16;
  TrackerState s;
  s.x = Eigen::Vector4d(1, 0, 1, 0);
  s.P = Eigen::Matrix4d::Zero();
  s.beam = Angle{1.0, 1.0};
  const auto cfg = tracker(Algorithm::kMl, Mode::kDiscrete, 1e4, 100.0);
  CHECK_THROWS_AS(fbt_update(s, cfg, sample(1.0), a), UnsupportedGeometry);
  CHECK_THROWS_AS(ml_update(s, cfg, sample(1.0), a), UnsupportedGeometry);
  AoAState init;
  init.elevation = PlaneState{1.0, 0.0};
  CHECK_THROWS_AS(Tracker(cfg, a, init), UnsupportedGeometry);
}

TEST_CASE("nearest branch of arccos") {
  CHECK(angle_from_cosine(std::cos(0.5), -0.4) == doctest::Approx(-0.5));
  CHECK(angle_from_cosine(std::cos(0.5), 0.4) == doctest::Approx(0.5));
  CHECK(angle_from_cosine(std::cos(0.5), 6.5) == doctest::Approx(2 * kPi + 0.5));
  CHECK(angle_from_cosine(2.0, 0.1) == 0.0);
}

TEST_CASE("ML: aligned noiseless pilot leaves the estimate alone") {
  const auto cfg = tracker(Algorithm::kMl, Mode::kDiscrete, 1e4, kInf);
  const auto s = state2(1.1, 0.0, Eigen::Matrix2d::Zero());
  const auto c = ml_candidates(1.0, 1.1, 16);
  CHECK(c.offset == 0.0);
  CHECK(c.angle_plus == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(c.angle_minus == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(ml_update(s, cfg, sample(1.0), ula(16)).x[0] == doctest::Approx(1.1).epsilon(1e-14));
  // Noise can push the magnitude above one; that reads as zero offset.
  CHECK(ml_candidates(1.2, 1.1, 16).offset == 0.0);
}

TEST_CASE("ML: inverting a noiseless main-lobe observation") {
  const int n = 8;
  const double ref = 1.2;
  const double truth = std::acos(std::cos(ref) + 0.05);
  const auto h = signal_part(ula(n), Angle{truth, std::nullopt}, Angle{ref, std::nullopt});
  // The inversion assumes a Gaussian main lobe; the oracle applies the same
  // inversion to the closed-form kernel magnitude.
  const double mag = std::abs(bt_test::dirichlet(n, 0.5, 0.05));
  const double expected = std::sqrt(-2.0 * std::log(mag) / (n * n));
  const auto c = ml_candidates(h, ref, n);
  CHECK(c.offset == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(c.offset - 0.05) < 5e-3);

  const auto cfg = tracker(Algorithm::kMl, Mode::kDiscrete, 1e4, kInf);
  const auto out = ml_update(state2(ref, 0.0, Eigen::Matrix2d::Zero()), cfg, sample(h), ula(n));
  CHECK(std::cos(out.x[0]) - std::cos(ref) == doctest::Approx(c.offset).epsilon(1e-12));
}

TEST_CASE("ML: the phase test picks the true side of the beam") {
  bt_test::Gen g(23);
  for (int n : {8, 16, 64, 256}) {
    for (int i = 0; i < 400; ++i) {
      const double ref = g.uniform(0.4, kPi - 0.4);
      const double mag = g.uniform(0.01, 0.9) / n;
      const double sign = i % 2 ? 1.0 : -1.0;
      const double truth = std::acos(std::cos(ref) + sign * mag);
      const auto h = signal_part(ula(n), Angle{truth, std::nullopt}, Angle{ref, std::nullopt});
      const auto cfg = tracker(Algorithm::kMl, Mode::kDiscrete, 1e4, kInf);
      const auto out = ml_update(state2(ref, 0.0, Eigen::Matrix2d::Zero()), cfg, sample(h), ula(n));
      const double moved = std::cos(out.x[0]) - std::cos(ref);
      CAPTURE(n);
      CAPTURE(mag);
      CHECK(moved * sign > 0.0);
    }
  }
}

TEST_CASE("ML: continuous-discrete slope correction") {
  const double q = 1e4, T = 1e-3, rho = 100.0;
  const double xi = kPi * 1e-3 * 31.5;
  CHECK(xi == doctest::Approx(0.09896).epsilon(1e-4));
  const auto cfg = tracker(Algorithm::kMl, Mode::kContinuousDiscrete, q, rho, T);
  const auto s = state2(kPi / 2, 0.0, Eigen::Matrix2d::Zero());
  const std::complex<double> y(0.95, 0.1);
  const auto out = ml_update(s, cfg, sample(y), ula(64));
  CHECK(out.x[1] == doctest::Approx(q * T * xi * 0.1 / (q * T * xi * xi + 0.5 / rho)).epsilon(1e-12));
}

TEST_CASE("modes differ only between pilots") {
  bt_test::Gen g(24);
  for (int i = 0; i < 100; ++i) {
    const auto s = state2(g.uniform(0.5, 2.5), 0.0, Eigen::Matrix2d::Zero());
    const std::complex<double> y(g.uniform(0.5, 1.0), g.uniform(-0.3, 0.3));
    for (Algorithm alg : {Algorithm::kMl, Algorithm::kFbt}) {
      const auto d = tracker(alg, Mode::kDiscrete, 1e4, 100.0);
      const auto cd = tracker(alg, Mode::kContinuousDiscrete, 1e4, 100.0);
      const auto fd = alg == Algorithm::kMl ? ml_update(s, d, sample(y), ula(32))
                                            : fbt_update(s, d, sample(y), ula(32));
      const auto fc = alg == Algorithm::kMl ? ml_update(s, cd, sample(y), ula(32))
                                            : fbt_update(s, cd, sample(y), ula(32));
      CHECK(fd.x[0] == fc.x[0]);
    }
  }
}

TEST_CASE("LMMSE shrinkage factor") {
  for (double rho : {1e-3, 1.0, 1e3, 1e9}) {
    const double f = rho / (rho + 1.0);
    CHECK(f > 0.0);
    CHECK(f < 1.0);
  }
  CHECK(1e12 / (1e12 + 1.0) == doctest::Approx(1.0));
}

TEST_CASE("covariance stays symmetric PSD along noisy runs") {
  bt_test::Gen g(25);
  double worst = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 1 << g.integer(2, 8);
    const double q = g.log_uniform(1e2, 1e5);
    const double rho = g.log_uniform(1.0, 1e4);
    const double T = g.log_uniform(2e-4, 5e-3);
    ChannelConfig ch;
    ch.q_intensity = q;
    ch.snr_total_db = 10 * std::log10(rho);
    TrajectorySource src;
    src.tick = T / 10;
    for (Mode mode : {Mode::kDiscrete, Mode::kContinuousDiscrete}) {
      auto cfg = tracker(Algorithm::kEkf, mode, q, rho, T);
      RandomStream rng(100 + trial);
      const Trajectory traj = gen_trajectory(ch, src, 200 * T, rng);
      const TrackerConfig resolved = cfg.resolve(ch, ula(n));
      std::vector<std::complex<double>> noise(200);
      for (auto& z : noise) z = rng.complex_normal();
      run_tracker(resolved, ula(n), ch, traj, traj.size(), noise,
                  [&](const TrackPoint&, const Tracker& t) {
                    const auto& P = t.state().P;
                    CHECK((P - P.transpose()).norm() == 0.0);
                    worst = std::min(worst, min_eigen(P));
                  });
    }
  }
  CHECK(worst >= -1e-10);
}

TEST_CASE("noiseless constant-rate tracking: CD converges, D saws") {
  ChannelConfig ch;
  ch.q_intensity = 0.0;
  ch.snr_total_db = kInf;
  ch.phi0 = kPi / 4;
  TrajectorySource src;
  src.kind = ConstantRate{100.0 / 3.6, 20.0};
  src.tick = 1e-4;
  const Trajectory traj = gen_trajectory(ch, src, 0.1, 0);
  RandomStream rng(1);

  auto cd = tracker(Algorithm::kEkf, Mode::kContinuousDiscrete, 1e3, kInf, 5e-3);
  const auto cd_run = run_tracker(cd, ula(64), ch, traj, 0.1, rng);
  // The beam moves every T / n_s = 5 ticks; at those ticks it sits on the truth.
  const double rate = 100.0 / 3.6 / 20.0;
  for (std::size_t i = 500; i < cd_run.size(); ++i) {
    const double err = std::abs(cd_run[i].beam.azimuth - cd_run[i].truth.azimuth.angle);
    if (i % 5 == 0) CHECK(err < 1e-6);
    CHECK(err <= rate * 5e-4 + 1e-8);
  }
  CHECK(cd_run.back().rate_estimate == doctest::Approx(rate).epsilon(1e-6));

  auto d = tracker(Algorithm::kEkf, Mode::kDiscrete, 1e3, kInf, 5e-3);
  const auto d_run = run_tracker(d, ula(64), ch, traj, 0.1, rng);
  int drops = 0;
  for (std::size_t i = 51; i < d_run.size(); ++i) {
    const double e_prev = std::abs(d_run[i - 1].beam.azimuth - d_run[i - 1].truth.azimuth.angle);
    const double e_now = std::abs(d_run[i].beam.azimuth - d_run[i].truth.azimuth.angle);
    if (d_run[i].pilot) {
      drops += e_now < e_prev;
    } else {
      CHECK(e_now > e_prev);
      CHECK(d_run[i].beam.azimuth == d_run[i - 1].beam.azimuth);
    }
  }
  CHECK(drops == 18);  // pilots at ticks 100, 150, ..., 950
}

TEST_CASE("tracker runs are reproducible") {
  ChannelConfig ch;
  ch.q_intensity = 1e4;
  ch.snr_total_db = 20.0;
  TrajectorySource src;
  src.tick = 1e-4;
  const Trajectory traj = gen_trajectory(ch, src, 0.05, 9);
  for (Algorithm alg : {Algorithm::kEkf, Algorithm::kFbt, Algorithm::kMl}) {
    const auto cfg = tracker(alg, Mode::kContinuousDiscrete, 1e4, 100.0);
    RandomStream r1(4), r2(4);
    const auto a = run_tracker(cfg, ula(32), ch, traj, 0.05, r1);
    const auto b = run_tracker(cfg, ula(32), ch, traj, 0.05, r2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].estimate.azimuth == b[i].estimate.azimuth);
  }
}

TEST_CASE("pilot schedule") {
  TrackerConfig cfg;
  cfg.pilot_period = 1e-3;
  const auto s = Schedule::make(cfg, 1e-4);
  CHECK(s.pilot_ticks == 10);
  CHECK(s.predict_ticks == 1);
  CHECK(!s.pilot_at(0));
  CHECK(s.pilot_at(10));
  CHECK(!s.pilot_at(15));
  cfg.n_s = 5;
  CHECK(Schedule::make(cfg, 1e-4).predict_ticks == 2);
  CHECK(Schedule::make(cfg, 1e-4).predict_at(10));
  CHECK_THROWS_AS(Schedule::make(cfg, 3e-4), ConfigError);
  CHECK(pilot_count(cfg, 1e-4, 1001) == 100);
  CHECK(pilot_count(cfg, 1e-4, 1000) == 99);
}

TEST_CASE("labels and defaults") {
  ChannelConfig ch;
  ch.q_intensity = 2e3;
  ch.snr_per_element_db = 10.0;
  TrackerConfig cfg;
  cfg.algorithm = Algorithm::kFbt;
  cfg.mode = Mode::kDiscrete;
  cfg.pilot_period = 2e-3;
  CHECK(cfg.label() == "FBT_D");
  const auto r = cfg.resolve(ch, ula(16));
  CHECK(r.q() == 2e3);
  CHECK(r.snr() == doctest::Approx(160.0));
  CHECK(*r.p0_angle == 1e-6);
  CHECK(*r.p0_rate == doctest::Approx(4.0));
  cfg.n_s = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

}  // TEST_SUITE
