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

#include <sstream>

#include "beamtrack/channel.hpp"
#include "oracles.hpp"

using namespace beamtrack;
using bt_test::kPi;

namespace {

ChannelConfig channel(double q, double snr_db = 20.0) {
  ChannelConfig c;
  c.q_intensity = q;
  c.snr_total_db = snr_db;
  return c;
}

TraceData trace_from(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in, "test.csv");
}

std::string ingest_error(const std::string& text) {
  try {
    trace_from(text);
  } catch (const IngestError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("noiseless Brownian model is a straight line") {
  ChannelConfig c = channel(0.0);
  c.phi0 = 0.4;
  c.phidot_init = 2.5;
  TrajectorySource src;
  src.tick = 1e-4;
  const Trajectory tr = gen_trajectory(c, src, 0.05, 7);
  REQUIRE(tr.size() == 501);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.at(i).azimuth.angle == doctest::Approx(0.4 + 2.5 * i * 1e-4).epsilon(1e-12));
    CHECK(tr.at(i).azimuth.rate == 2.5);
  }
}

TEST_CASE("constant-rate model from vehicle speed and range") {
  ChannelConfig c = channel(0.0);
  c.phi0 = kPi / 4;
  TrajectorySource src;
  src.kind = ConstantRate{100.0 / 3.6, 20.0};
  src.tick = 1e-4;
  const Trajectory tr = gen_trajectory(c, src, 0.1, 1);
  for (std::size_t i = 0; i < tr.size(); i += 50) {
    const double t = i * 1e-4;
    CHECK(tr.at(i).azimuth.angle == doctest::Approx(kPi / 4 + (27.7778 / 20.0) * t).epsilon(1e-5));
  }
  CHECK(tr.at(1000).azimuth.rate == doctest::Approx(100.0 / 3.6 / 20.0));
}

TEST_CASE("Brownian rate variance grows as Q t and increments are uncorrelated") {
  const double q = 1e4;
  const double tick = 1e-3;
  const int paths = 100000;
  ChannelConfig c = channel(q);
  TrajectorySource src;
  src.tick = tick;
  double sum = 0.0, sum_sq = 0.0;
  double inc_sq = 0.0, lag_prod = 0.0;
  RandomStream rng(99);
  for (int p = 0; p < paths; ++p) {
    const Trajectory tr = gen_trajectory(c, src, 0.01, rng);
    const double v = tr.phidot().back();
    sum += v;
    sum_sq += v * v;
    const double d1 = tr.phidot()[1] - tr.phidot()[0];
    const double d2 = tr.phidot()[2] - tr.phidot()[1];
    inc_sq += d1 * d1;
    lag_prod += d1 * d2;
  }
  const double mean = sum / paths;
  const double var = sum_sq / paths - mean * mean;
  CHECK(var == doctest::Approx(q * 0.01).epsilon(0.03));
  CHECK(inc_sq / paths == doctest::Approx(q * tick).epsilon(0.03));
  CHECK(std::abs(lag_prod / inc_sq) < 0.02);
}

TEST_CASE("angle follows the Euler-Maruyama recursion") {
  ChannelConfig c = channel(1e4);
  TrajectorySource src;
  src.tick = 2e-4;
  const Trajectory tr = gen_trajectory(c, src, 0.02, 3);
  for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
    CHECK(tr.phi()[i + 1] == tr.phi()[i] + tr.phidot()[i] * 2e-4);
  }
}

TEST_CASE("trajectories are reproducible per seed") {
  ChannelConfig c = channel(1e4);
  c.theta0 = 1.2;
  TrajectorySource src;
  const Trajectory a = gen_trajectory(c, src, 0.05, 42);
  const Trajectory b = gen_trajectory(c, src, 0.05, 42);
  const Trajectory d = gen_trajectory(c, src, 0.05, 43);
  CHECK(a.phi() == b.phi());
  CHECK(a.has_elevation());
  CHECK(a.at(100).elevation->angle == b.at(100).elevation->angle);
  CHECK(a.phi() != d.phi());
}

TEST_CASE("derived streams differ by run and purpose") {
  auto a = RandomStream::derive(1, 0, StreamPurpose::kTrajectory);
  auto b = RandomStream::derive(1, 1, StreamPurpose::kTrajectory);
  auto c = RandomStream::derive(1, 0, StreamPurpose::kMeasurementNoise);
  auto a2 = RandomStream::derive(1, 0, StreamPurpose::kTrajectory);
  const double x = a.normal();
  CHECK(x == a2.normal());
  CHECK(x != b.normal());
  CHECK(x != c.normal());
}

TEST_CASE("noiseless aligned measurement is exactly one") {
  ChannelConfig c = channel(0.0, std::numeric_limits<double>::infinity());
  ArrayConfig a;
  RandomStream rng(1);
  AoAState truth;
  truth.azimuth.angle = 1.1;
  const auto m = measure(c, a, truth, Angle{1.1, std::nullopt}, rng);
  CHECK(m.y == std::complex<double>(1.0, 0.0));
}

TEST_CASE("measurements are reproducible per seed") {
  ChannelConfig c = channel(0.0, 20.0);
  ArrayConfig a;
  AoAState truth;
  truth.azimuth.angle = 1.0;
  RandomStream r1(5), r2(5);
  for (int i = 0; i < 10; ++i) {
    const auto m1 = measure(c, a, truth, Angle{1.01, std::nullopt}, r1);
    const auto m2 = measure(c, a, truth, Angle{1.01, std::nullopt}, r2);
    CHECK(m1.y == m2.y);
  }
}

TEST_CASE("measurement noise power and circular symmetry") {
  ChannelConfig c = channel(0.0, 20.0);
  ArrayConfig a;
  AoAState truth;
  truth.azimuth.angle = 1.0;
  const Angle beam{1.02, std::nullopt};
  const auto h = signal_part(a, truth.angle(), beam);
  RandomStream rng(8);
  const int n = 100000;
  double power = 0.0, re2 = 0.0, im2 = 0.0, reim = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto m = measure(c, a, truth, beam, rng);
    power += std::norm(m.y - h);
    re2 += m.noise.real() * m.noise.real();
    im2 += m.noise.imag() * m.noise.imag();
    reim += m.noise.real() * m.noise.imag();
  }
  CHECK(power / n == doctest::Approx(0.01).epsilon(0.02));
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(reim / std::sqrt(re2 * im2)) < 0.02);
}

TEST_CASE("SNR conventions") {
  ChannelConfig c;
  c.snr_per_element_db = 16.0;
  CHECK(c.rho(64) == doctest::Approx(2548.0).epsilon(1e-3));
  CHECK(c.snr_convention() == SnrConvention::kPerElementFixed);
  ChannelConfig t = channel(0.0, 20.0);
  CHECK(t.rho(1) == doctest::Approx(100.0));
  CHECK(t.rho(256) == doctest::Approx(100.0));
  c.snr_per_element_db = 20.0;
  CHECK(c.rho(1) == t.rho(1));
  ChannelConfig both = t;
  both.snr_per_element_db = 3.0;
  CHECK_THROWS_AS(both.validate(), ConfigError);
  ChannelConfig none;
  CHECK_THROWS_AS(none.validate(), ConfigError);
}

TEST_CASE("two-row trace interpolates linearly") {
  const TraceData tr = trace_from("t_s,phi_rad\n0,1.0\n0.1,1.1\n");
  TrajectorySource src;
  src.kind = tr;
  src.tick = 1e-3;
  const Trajectory traj = gen_trajectory(channel(0.0), src, 0.1, 0);
  for (std::size_t i = 0; i < traj.size(); i += 10) {
    CHECK(traj.at(i).azimuth.angle == doctest::Approx(1.0 + i * 1e-3).epsilon(1e-12));
    CHECK(traj.at(i).azimuth.rate == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trace times are taken relative to the first row") {
  const TraceData tr = trace_from("t_s,phi_rad\n5.0,0\n5.5,1\n6.0,3\n");
  TrajectorySource src;
  src.kind = tr;
  src.tick = 0.25;
  const Trajectory traj = gen_trajectory(channel(0.0), src, 1.0, 0);
  CHECK(traj.at(1).azimuth.angle == doctest::Approx(0.5));
  CHECK(traj.at(3).azimuth.angle == doctest::Approx(2.0));
  CHECK(traj.at(3).azimuth.rate == doctest::Approx(4.0));
}

TEST_CASE("three-column trace carries elevation") {
  const TraceData tr = trace_from("t_s,phi_rad,theta_rad\n0,1,1.5\n0.1,1.2,1.4\n");
  CHECK(tr.has_elevation());
  TrajectorySource src;
  src.kind = tr;
  src.tick = 0.01;
  const Trajectory traj = gen_trajectory(channel(0.0), src, 0.1, 0);
  CHECK(traj.has_elevation());
  CHECK(traj.at(5).elevation->angle == doctest::Approx(1.45));
}

TEST_CASE("malformed traces name the offending row") {
  CHECK(ingest_error("t_s,phi_rad\n0,1\n0.2,1\n0.1,2\n").find("row 4") != std::string::npos);
  CHECK(ingest_error("t_s,phi_rad\n0,1\n0,2\n").find("strictly increasing") != std::string::npos);
  CHECK(ingest_error("t_s,phi_rad\n0,1\n0.1,nan\n").find("row 3") != std::string::npos);
  CHECK(ingest_error("t_s,phi_rad\n0,1\n0.1\n").find("row 3") != std::string::npos);
  CHECK(ingest_error("t_s,phi_rad\n0,1\n0.1,abc\n").find("cannot parse") != std::string::npos);
  CHECK(ingest_error("time,angle\n0,1\n").find("header") != std::string::npos);
  CHECK(ingest_error("t_s,phi_rad\n0,1\n").find("two data rows") != std::string::npos);
  CHECK(ingest_error("").find("header") != std::string::npos);
  CHECK_THROWS_AS(ingest_trace("/nonexistent/trace.csv"), IngestError);
}

TEST_CASE("a trace shorter than the run is rejected") {
  TrajectorySource src;
  src.kind = trace_from("t_s,phi_rad\n0,1.0\n0.05,1.1\n");
  src.tick = 1e-3;
  CHECK_THROWS_AS(gen_trajectory(channel(0.0), src, 0.1, 0), IngestError);
}

TEST_CASE("tick counting") {
  CHECK(ticks_for(0.1, 1e-4) == 1000);
  CHECK(ticks_for(0.1, 3e-2) == 3);
  CHECK_THROWS_AS(ticks_for(0.0, 1e-3), ConfigError);
  CHECK_THROWS_AS(ticks_for(1e-5, 1e-3), ConfigError);
}

}  // TEST_SUITE
