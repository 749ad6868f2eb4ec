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

#include "beamtrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "beamtrack/errors.hpp"

namespace beamtrack {

namespace {

constexpr std::size_t kRunsPerChunk = 8;
constexpr std::size_t kRateBins = 2000;

struct Grid {
  double tick = 0.0;
  std::size_t ticks = 0;
  std::size_t substeps = 1;
  std::size_t points = 0;
  double rho = 1.0;         // channel SNR used for measurements
  double rho_metric = 1.0;  // SNR scale for reported metrics
  double snr_lo_db = 0.0;
  double snr_step_db = 0.05;
  std::size_t snr_bins = 0;
  double rate_step = 0.0;
};

struct TrackerAccum {
  std::vector<double> sq_err, snr, rate;
  std::vector<std::uint64_t> snr_hist, rate_hist;
  std::size_t diverged = 0;
  SlopeMoments slope;
  std::vector<SamplePath> paths;

  explicit TrackerAccum(const Grid& g)
      : sq_err(g.points, 0.0),
        snr(g.points, 0.0),
        rate(g.points, 0.0),
        snr_hist(g.snr_bins, 0),
        rate_hist(kRateBins, 0) {}

  void merge(TrackerAccum&& o) {
    for (std::size_t i = 0; i < sq_err.size(); ++i) {
      sq_err[i] += o.sq_err[i];
      snr[i] += o.snr[i];
      rate[i] += o.rate[i];
    }
    for (std::size_t i = 0; i < snr_hist.size(); ++i) snr_hist[i] += o.snr_hist[i];
    for (std::size_t i = 0; i < rate_hist.size(); ++i) rate_hist[i] += o.rate_hist[i];
    diverged += o.diverged;
    slope.merge(o.slope);
    for (auto& p : o.paths) paths.push_back(std::move(p));
  }
};

using Accum = std::vector<TrackerAccum>;

Accum make_accum(const Grid& g, std::size_t trackers) {
  Accum a;
  a.reserve(trackers);
  for (std::size_t i = 0; i < trackers; ++i) a.emplace_back(g);
  return a;
}

std::size_t bin_of(double v, double lo, double step, std::size_t bins) {
  if (!(v > lo)) return 0;  // also catches -inf for zero SNR
  const double idx = std::floor((v - lo) / step);
  return std::min(static_cast<std::size_t>(idx), bins - 1);
}

Cdf histogram_cdf(const std::vector<std::uint64_t>& hist, double lo, double step) {
  Cdf c;
  c.x.resize(hist.size());
  c.p.resize(hist.size());
  std::uint64_t total = 0;
  for (auto h : hist) total += h;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    acc += hist[i];
    c.x[i] = lo + static_cast<double>(i + 1) * step;
    c.p[i] = total == 0 ? 0.0 : static_cast<double>(acc) / static_cast<double>(total);
  }
  return c;
}

// Noiseless genie tracking: each pilot reveals the true angle. The
// continuous-discrete variant extrapolates with the slope between the
// last two revealed angles.
void drive_ideal(const TrackerConfig& cfg, const Trajectory& traj, std::size_t ticks,
                 const std::function<void(const TrackPoint&)>& visit) {
  const Schedule sched = Schedule::make(cfg, traj.tick());
  const bool cd = cfg.mode == Mode::kContinuousDiscrete;
  const bool dual = traj.has_elevation();
  double phi = traj.at(0).azimuth.angle, slope = 0.0, last_pilot_phi = phi;
  std::size_t last_predict = 0;
  for (std::size_t i = 0; i < ticks; ++i) {
    const AoAState truth = traj.at(i);
    if (cd && sched.predict_at(i)) {
      phi += slope * static_cast<double>(i - last_predict) * traj.tick();
      last_predict = i;
    }
    if (sched.pilot_at(i)) {
      phi = truth.azimuth.angle;
      if (cd) slope = (phi - last_pilot_phi) / cfg.pilot_period;
      last_pilot_phi = phi;
    }
    TrackPoint p;
    p.t = static_cast<double>(i) * traj.tick();
    p.truth = truth;
    p.estimate = Angle{phi, std::nullopt};
    if (dual) p.estimate.elevation = truth.elevation->angle;
    p.rate_estimate = slope;
    p.beam = p.estimate;
    visit(p);
  }
}

class Engine {
 public:
  Engine(const RunConfig& cfg, const Grid& grid) : cfg_(cfg), grid_(grid) {
    for (const auto& t : cfg.trackers) resolved_.push_back(t.resolve(cfg.channel, cfg.array));
    for (const auto& t : resolved_) {
      max_pilots_ = std::max(max_pilots_, pilot_count(t, grid.tick, grid.ticks));
    }
    source_ = cfg.source;
    source_.tick = grid.tick;
  }

  const std::vector<TrackerConfig>& resolved() const { return resolved_; }

  void run(std::size_t r, Accum& acc) const {
    RandomStream traj_rng =
        RandomStream::derive(cfg_.master_seed, r, StreamPurpose::kTrajectory);
    const Trajectory traj = gen_trajectory(cfg_.channel, source_, cfg_.duration, traj_rng);
    RandomStream noise_rng =
        RandomStream::derive(cfg_.master_seed, r, StreamPurpose::kMeasurementNoise);
    std::vector<std::complex<double>> noise(max_pilots_);
    for (auto& n : noise) n = noise_rng.complex_normal();

    for (std::size_t ti = 0; ti < resolved_.size(); ++ti) {
      TrackerAccum& a = acc[ti];
      const bool keep_path = r < static_cast<std::size_t>(cfg_.sample_paths);
      SamplePath path;
      path.run = r;
      bool diverged = false;
      std::size_t i = 0;
      auto visit = [&](const TrackPoint& p) {
        a.slope.add(p.truth.azimuth.rate, p.rate_estimate);
        for (std::size_t j = 0; j < grid_.substeps; ++j) {
          const std::size_t idx = i * grid_.substeps + j;
          const double frac = static_cast<double>(j) / static_cast<double>(grid_.substeps);
          const AoAState truth = traj.at(i, frac);
          const double err = truth.azimuth.angle - p.beam.azimuth;
          double sq = err * err;
          if (truth.elevation && p.beam.elevation) {
            const double e = truth.elevation->angle - *p.beam.elevation;
            sq += e * e;
          }
          if (std::abs(err) > std::numbers::pi) diverged = true;
          const double gain = std::norm(array_response(cfg_.array, truth.angle(), p.beam));
          const double gamma = grid_.rho_metric * gain;
          const double rate = std::log2(1.0 + gamma);
          a.sq_err[idx] += sq;
          a.snr[idx] += gamma;
          a.rate[idx] += rate;
          ++a.snr_hist[bin_of(10.0 * std::log10(gamma), grid_.snr_lo_db, grid_.snr_step_db,
                              grid_.snr_bins)];
          ++a.rate_hist[bin_of(rate, 0.0, grid_.rate_step, kRateBins)];
          if (keep_path) {
            path.truth.push_back(truth.azimuth.angle);
            path.estimate.push_back(p.beam.azimuth);
            path.snr.push_back(gamma);
            if (truth.elevation && p.beam.elevation) {
              path.truth_elevation.push_back(truth.elevation->angle);
              path.estimate_elevation.push_back(*p.beam.elevation);
            }
          }
        }
        ++i;
      };
      if (cfg_.ideal_pilots) {
        drive_ideal(resolved_[ti], traj, grid_.ticks, visit);
      } else {
        run_tracker(resolved_[ti], cfg_.array, cfg_.channel, traj, grid_.ticks, noise,
                    [&](const TrackPoint& p, const Tracker&) { visit(p); });
      }
      if (diverged) ++a.diverged;
      if (keep_path) a.paths.push_back(std::move(path));
    }
  }

 private:
  const RunConfig& cfg_;
  Grid grid_;
  std::vector<TrackerConfig> resolved_;
  TrajectorySource source_;
  std::size_t max_pilots_ = 0;
};

}  // namespace

void RunConfig::validate() const {
  array.validate();
  channel.validate();
  source.validate();
  if (trackers.empty()) throw ConfigError("run: at least one tracker is required");
  for (const auto& t : trackers) t.validate();
  if (!(duration > 0.0)) throw ConfigError("run: duration must be > 0");
  if (n_runs < 1) throw ConfigError("run: n_runs must be >= 1");
  if (metric_substeps < 1) throw ConfigError("run: metric_substeps must be >= 1");
  if (sample_paths < 0) throw ConfigError("run: sample_paths must be >= 0");
  if (sim_tick_s && !(*sim_tick_s > 0.0)) throw ConfigError("run: sim_tick must be > 0");
  if (!(cdf_floor_db > 0.0) || !(cdf_step_db > 0.0)) {
    throw ConfigError("run: CDF span and step must be > 0");
  }
  const bool from_trace = std::holds_alternative<TraceData>(source.kind);
  if (!array.azimuth_only() && !from_trace && !channel.theta0) {
    throw ConfigError("run: a dual-plane UPA needs channel.theta0");
  }
  if (const auto* tr = std::get_if<TraceData>(&source.kind);
      tr && !array.azimuth_only() && !tr->has_elevation()) {
    throw ConfigError("run: a dual-plane UPA needs a trace with a theta_rad column");
  }
  const double tick = sim_tick();
  for (const auto& t : trackers) Schedule::make(t, tick);
  ticks_for(duration, tick);
}

double RunConfig::sim_tick() const {
  if (sim_tick_s) return *sim_tick_s;
  double tick = std::numeric_limits<double>::infinity();
  for (const auto& t : trackers) tick = std::min(tick, t.pilot_period / t.n_s);
  if (!std::isfinite(tick)) throw ConfigError("run: cannot derive a simulation tick");
  return tick;
}

double snr_normalization(const RunConfig& cfg, int n_elements) {
  return cfg.channel.rho(n_elements);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BEAMTRACK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  cfg.validate();
  Grid g;
  g.tick = cfg.sim_tick();
  g.ticks = ticks_for(cfg.duration, g.tick);
  g.substeps = static_cast<std::size_t>(cfg.metric_substeps);
  g.points = g.ticks * g.substeps;
  g.rho = cfg.channel.rho(cfg.array.n_elements);
  g.rho_metric = std::isinf(g.rho) ? 1.0 : g.rho;
  const double top_db = 10.0 * std::log10(g.rho_metric);
  g.snr_step_db = cfg.cdf_step_db;
  g.snr_lo_db = top_db - cfg.cdf_floor_db;
  g.snr_bins = static_cast<std::size_t>(std::ceil(cfg.cdf_floor_db / cfg.cdf_step_db)) + 1;
  g.rate_step = max_rate(g.rho_metric) * (1.0 + 1e-9) / static_cast<double>(kRateBins);

  const Engine engine(cfg, g);
  const std::size_t n_trackers = cfg.trackers.size();
  const std::size_t n_runs = static_cast<std::size_t>(cfg.n_runs);
  const std::size_t n_chunks = (n_runs + kRunsPerChunk - 1) / kRunsPerChunk;

  // Chunks finish in any order but are merged strictly in chunk order, so
  // the floating-point reduction does not depend on the thread count.
  Accum total = make_accum(g, n_trackers);
  std::vector<std::optional<Accum>> pending(n_chunks);
  std::size_t next_merge = 0;
  std::mutex merge_mutex;
  std::atomic<std::size_t> next_chunk{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t c = next_chunk.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        Accum acc = make_accum(g, n_trackers);
        const std::size_t end = std::min(n_runs, (c + 1) * kRunsPerChunk);
        for (std::size_t r = c * kRunsPerChunk; r < end; ++r) engine.run(r, acc);
        std::lock_guard lock(merge_mutex);
        pending[c] = std::move(acc);
        while (next_merge < n_chunks && pending[next_merge]) {
          for (std::size_t t = 0; t < n_trackers; ++t) {
            total[t].merge(std::move((*pending[next_merge])[t]));
          }
          pending[next_merge].reset();
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard lock(merge_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const int threads = std::min<int>(resolve_threads(cfg.threads), static_cast<int>(n_chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  result.rho = g.rho_metric;
  result.t.resize(g.points);
  const double dt = g.tick / static_cast<double>(g.substeps);
  for (std::size_t i = 0; i < g.points; ++i) result.t[i] = static_cast<double>(i) * dt;

  const double runs = static_cast<double>(n_runs);
  for (std::size_t ti = 0; ti < n_trackers; ++ti) {
    TrackerAccum& a = total[ti];
    MetricSeries s;
    const auto& tc = engine.resolved()[ti];
    s.label = cfg.ideal_pilots ? "IDEAL_" + to_string(tc.mode) : tc.label();
    s.pilot_period = tc.pilot_period;
    s.mse.resize(g.points);
    s.snr_inst.resize(g.points);
    s.rate.resize(g.points);
    double mse_sum = 0.0, snr_sum = 0.0, rate_sum = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) {
      s.mse[i] = a.sq_err[i] / runs;
      s.snr_inst[i] = a.snr[i] / runs;
      s.rate[i] = a.rate[i] / runs;
      mse_sum += s.mse[i];
      snr_sum += s.snr_inst[i];
      rate_sum += s.rate[i];
    }
    const double pts = static_cast<double>(g.points);
    s.mse_avg = mse_sum / pts;
    s.snr_avg_db = 10.0 * std::log10(snr_sum / pts);
    s.avg_rate = rate_sum / pts;
    s.divergence_fraction = static_cast<double>(a.diverged) / runs;
    s.kappa_hat = a.slope.kappa();
    s.cdf_snr_db = histogram_cdf(a.snr_hist, g.snr_lo_db, g.snr_step_db);
    s.cdf_rate = histogram_cdf(a.rate_hist, 0.0, g.rate_step);
    s.paths = std::move(a.paths);
    result.series.push_back(std::move(s));
  }
  return result;
}

RateSummary summarize_rates(const MetricSeries& series, const DesignInputs& d) {
  if (series.mse.empty()) throw ConfigError("summarize_rates: empty series");
  RateSummary r;
  r.outage_rate = outage_rate(d);
  r.avg_rate = series.avg_rate;
  r.effective_outage_rate = effective_rate(d, series.pilot_period, r.outage_rate);
  r.effective_avg_rate = effective_rate(d, series.pilot_period, r.avg_rate);
  return r;
}

}  // namespace beamtrack
