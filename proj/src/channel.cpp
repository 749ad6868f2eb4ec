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

#include "beamtrack/channel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <string_view>

namespace beamtrack {

double db_to_linear(double db) {
  if (std::isinf(db) && db > 0) return std::numeric_limits<double>::infinity();
  return std::pow(10.0, db / 10.0);
}

void ChannelConfig::validate() const {
  if (!(q_intensity >= 0.0)) throw ConfigError("channel: q_rad2_s3 must be >= 0");
  if (q_elevation && !(*q_elevation >= 0.0)) {
    throw ConfigError("channel: q_elevation_rad2_s3 must be >= 0");
  }
  if (snr_total_db.has_value() == snr_per_element_db.has_value()) {
    throw ConfigError("channel: set exactly one of snr_total_db / snr_per_element_db");
  }
  const double db = snr_total_db ? *snr_total_db : *snr_per_element_db;
  if (std::isnan(db) || (std::isinf(db) && db < 0)) throw ConfigError("channel: invalid SNR");
}

SnrConvention ChannelConfig::snr_convention() const {
  return snr_per_element_db ? SnrConvention::kPerElementFixed : SnrConvention::kTotalFixed;
}

double ChannelConfig::rho(int n_elements) const {
  validate();
  if (snr_total_db) return db_to_linear(*snr_total_db);
  return static_cast<double>(n_elements) * db_to_linear(*snr_per_element_db);
}

void TrajectorySource::validate() const {
  if (!(tick > 0.0)) throw ConfigError("trajectory: tick must be > 0");
  if (const auto* c = std::get_if<ConstantRate>(&kind); c && !(c->range_m > 0.0)) {
    throw ConfigError("trajectory: constant-rate source requires range_m > 0");
  }
  if (const auto* tr = std::get_if<TraceData>(&kind); tr && tr->t.size() < 2) {
    throw ConfigError("trajectory: trace needs at least two samples");
  }
}

Trajectory::Trajectory(double tick, std::vector<double> phi, std::vector<double> phidot,
                       std::vector<double> theta, std::vector<double> thetadot)
    : tick_(tick),
      phi_(std::move(phi)),
      phidot_(std::move(phidot)),
      theta_(std::move(theta)),
      thetadot_(std::move(thetadot)) {}

AoAState Trajectory::at(std::size_t i) const {
  AoAState s{{phi_[i], phidot_[i]}, std::nullopt};
  if (has_elevation()) s.elevation = PlaneState{theta_[i], thetadot_[i]};
  return s;
}

AoAState Trajectory::at(std::size_t i, double frac) const {
  if (frac == 0.0 || i + 1 >= size()) return at(i);
  AoAState s{{phi_[i] + frac * (phi_[i + 1] - phi_[i]), phidot_[i]}, std::nullopt};
  if (has_elevation()) {
    s.elevation = PlaneState{theta_[i] + frac * (theta_[i + 1] - theta_[i]), thetadot_[i]};
  }
  return s;
}

std::size_t ticks_for(double duration, double tick) {
  if (!(duration > 0.0)) throw ConfigError("duration must be > 0");
  if (!(tick > 0.0)) throw ConfigError("tick must be > 0");
  const double n = std::round(duration / tick);
  if (n < 1.0) throw ConfigError("duration shorter than one simulation tick");
  return static_cast<std::size_t>(n);
}

namespace {

Trajectory brownian(const ChannelConfig& cfg, double tick, std::size_t steps, RandomStream& rng) {
  const bool dual = cfg.theta0.has_value();
  std::vector<double> phi(steps + 1), phidot(steps + 1), theta, thetadot;
  phi[0] = cfg.phi0;
  phidot[0] = cfg.phidot_init;
  if (dual) {
    theta.resize(steps + 1);
    thetadot.resize(steps + 1);
    theta[0] = *cfg.theta0;
    thetadot[0] = cfg.thetadot_init;
  }
  const double sd_az = std::sqrt(cfg.q_intensity * tick);
  const double sd_el = std::sqrt(cfg.elevation_q() * tick);
  for (std::size_t i = 0; i < steps; ++i) {
    phi[i + 1] = phi[i] + phidot[i] * tick;
    phidot[i + 1] = phidot[i] + sd_az * rng.normal();
    if (dual) {
      theta[i + 1] = theta[i] + thetadot[i] * tick;
      thetadot[i + 1] = thetadot[i] + sd_el * rng.normal();
    }
  }
  return {tick, std::move(phi), std::move(phidot), std::move(theta), std::move(thetadot)};
}

Trajectory constant_rate(const ChannelConfig& cfg, const ConstantRate& c, double tick,
                         std::size_t steps) {
  const double rate = c.speed_m_s / c.range_m;
  std::vector<double> phi(steps + 1), phidot(steps + 1, rate), theta, thetadot;
  for (std::size_t i = 0; i <= steps; ++i) phi[i] = cfg.phi0 + rate * (static_cast<double>(i) * tick);
  if (cfg.theta0) {
    theta.resize(steps + 1);
    thetadot.assign(steps + 1, cfg.thetadot_init);
    for (std::size_t i = 0; i <= steps; ++i) {
      theta[i] = *cfg.theta0 + cfg.thetadot_init * (static_cast<double>(i) * tick);
    }
  }
  return {tick, std::move(phi), std::move(phidot), std::move(theta), std::move(thetadot)};
}

Trajectory resample_trace(const TraceData& trace, double tick, std::size_t steps, double duration) {
  if (trace.span() + 1e-12 < duration) {
    std::ostringstream msg;
    msg << "trace " << trace.source << " covers " << trace.span() << " s, run needs " << duration
        << " s";
    throw IngestError(msg.str());
  }
  const bool dual = trace.has_elevation();
  std::vector<double> phi(steps + 1), phidot(steps + 1), theta, thetadot;
  if (dual) {
    theta.resize(steps + 1);
    thetadot.resize(steps + 1);
  }
  const double t0 = trace.t.front();
  std::size_t seg = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * tick;
    while (seg + 2 < trace.t.size() && trace.t[seg + 1] <= t) ++seg;
    const double dt = trace.t[seg + 1] - trace.t[seg];
    const double frac = (t - trace.t[seg]) / dt;
    phidot[i] = (trace.phi[seg + 1] - trace.phi[seg]) / dt;
    phi[i] = trace.phi[seg] + frac * (trace.phi[seg + 1] - trace.phi[seg]);
    if (dual) {
      thetadot[i] = (trace.theta[seg + 1] - trace.theta[seg]) / dt;
      theta[i] = trace.theta[seg] + frac * (trace.theta[seg + 1] - trace.theta[seg]);
    }
  }
  return {tick, std::move(phi), std::move(phidot), std::move(theta), std::move(thetadot)};
}

}  // namespace

Trajectory gen_trajectory(const ChannelConfig& cfg, const TrajectorySource& src, double duration,
                          RandomStream& rng) {
  src.validate();
  const std::size_t steps = ticks_for(duration, src.tick);
  if (const auto* c = std::get_if<ConstantRate>(&src.kind)) {
    return constant_rate(cfg, *c, src.tick, steps);
  }
  if (const auto* tr = std::get_if<TraceData>(&src.kind)) {
    return resample_trace(*tr, src.tick, steps, duration);
  }
  return brownian(cfg, src.tick, steps, rng);
}

Trajectory gen_trajectory(const ChannelConfig& cfg, const TrajectorySource& src, double duration,
                          std::uint64_t seed) {
  RandomStream rng(seed);
  return gen_trajectory(cfg, src, duration, rng);
}

std::complex<double> observe(std::complex<double> h, std::complex<double> noise, double rho) {
  if (std::isinf(rho)) return h;
  return h + noise / std::sqrt(rho);
}

MeasurementSample measure(const ChannelConfig& cfg, const ArrayConfig& array, const AoAState& truth,
                          const Angle& beam, RandomStream& rng, double t, int k) {
  const double rho = cfg.rho(array.n_elements);
  const std::complex<double> h = array_response(array, truth.angle(), beam);
  const std::complex<double> n = rng.complex_normal();
  return {t, observe(h, n, rho), k, n};
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t row, const std::string& what) {
  throw IngestError(source + ": row " + std::to_string(row) + ": " + what);
}

double parse_field(std::string_view field, const std::string& source, std::size_t row,
                   const char* column) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    fail(source, row, std::string("cannot parse ") + column + " value '" + std::string(field) + "'");
  }
  if (!std::isfinite(v)) fail(source, row, std::string(column) + " is not finite");
  return v;
}

}  // namespace

TraceData parse_trace(std::istream& in, const std::string& source_name) {
  TraceData trace;
  trace.source = source_name;
  std::string line;
  std::size_t row = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split(view);
    if (columns == 0) {
      if (fields.size() < 2 || fields.size() > 3 || fields[0] != "t_s" || fields[1] != "phi_rad" ||
          (fields.size() == 3 && fields[2] != "theta_rad")) {
        fail(source_name, row, "expected header 't_s,phi_rad[,theta_rad]'");
      }
      columns = fields.size();
      continue;
    }
    if (fields.size() != columns) {
      fail(source_name, row,
           "expected " + std::to_string(columns) + " columns, got " + std::to_string(fields.size()));
    }
    const double t = parse_field(fields[0], source_name, row, "t_s");
    if (!trace.t.empty() && !(t > trace.t.back())) {
      fail(source_name, row, "t_s must be strictly increasing");
    }
    trace.t.push_back(t);
    trace.phi.push_back(parse_field(fields[1], source_name, row, "phi_rad"));
    if (columns == 3) trace.theta.push_back(parse_field(fields[2], source_name, row, "theta_rad"));
  }
  if (columns == 0) throw IngestError(source_name + ": missing header row");
  if (trace.t.size() < 2) throw IngestError(source_name + ": need at least two data rows");
  return trace;
}

TraceData ingest_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open trace file " + path.string());
  return parse_trace(in, path.string());
}

}  // namespace beamtrack
