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

#include "beamtrack/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "beamtrack/config.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/harness.hpp"
#include "beamtrack/pilot_design.hpp"

namespace beamtrack {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kTraceDefault = R"(name: trace
kind: monte_carlo
duration_ms: 100
array: {geometry: ula, n_elements: 64}
channel: {q_rad2_s3: 1e4, snr_total_db: 20}
trackers:
  - {algorithm: ekf, mode: d, pilot_period_ms: 1}
  - {algorithm: ekf, mode: cd, pilot_period_ms: 1}
  - {algorithm: ml, mode: d, pilot_period_ms: 1}
  - {algorithm: ml, mode: cd, pilot_period_ms: 1}
)";

constexpr std::string_view kPlotScript = R"(#!/usr/bin/env python3
# Plots every CSV under this directory: first column on x, the rest as lines.
import pathlib
import sys

import matplotlib.pyplot as plt
import pandas as pd

root = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)
for csv in sorted(root.rglob("*.csv")):
    df = pd.read_csv(csv)
    if df.shape[1] < 2 or not pd.api.types.is_numeric_dtype(df.iloc[:, 0]):
        continue
    ax = df.plot(x=df.columns[0], figsize=(7, 4), legend=df.shape[1] <= 13)
    ax.set_title(str(csv.relative_to(root)))
    plt.tight_layout()
    plt.savefig(csv.with_suffix(".png"), dpi=120)
    plt.close()
)";

class Csv {
 public:
  explicit Csv(const fs::path& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string num(double v) { return format_double(v); }
double to_db(double v) { return 10.0 * std::log10(v); }

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Column names for each series; repeated labels get their pilot period.
std::vector<std::string> column_labels(const ExperimentResult& r) {
  std::map<std::string, int> seen;
  for (const auto& s : r.series) ++seen[s.label];
  std::vector<std::string> out;
  for (const auto& s : r.series) {
    out.push_back(seen[s.label] > 1 ? s.label + "_T" + num(s.pilot_period * 1e3) + "ms" : s.label);
  }
  return out;
}

void write_time_csv(const fs::path& path, const ExperimentResult& r,
                    const std::vector<std::string>& labels,
                    const std::function<double(const MetricSeries&, std::size_t)>& value) {
  Csv csv(path);
  std::vector<std::string> header{"t_s"};
  header.insert(header.end(), labels.begin(), labels.end());
  csv.row(header);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    std::vector<std::string> row{num(r.t[i])};
    for (const auto& s : r.series) row.push_back(num(value(s, i)));
    csv.row(row);
  }
}

void write_cdf_csv(const fs::path& path, const char* x_name, const ExperimentResult& r,
                   const std::vector<std::string>& labels, Cdf MetricSeries::*member) {
  Csv csv(path);
  std::vector<std::string> header{x_name};
  header.insert(header.end(), labels.begin(), labels.end());
  csv.row(header);
  const Cdf& first = r.series.front().*member;
  for (std::size_t i = 0; i < first.x.size(); ++i) {
    std::vector<std::string> row{num(first.x[i])};
    for (const auto& s : r.series) row.push_back(num((s.*member).p[i]));
    csv.row(row);
  }
}

void write_paths_csv(const fs::path& path, const ExperimentResult& r,
                     const std::vector<std::string>& labels) {
  Csv csv(path);
  const bool dual = !r.series.front().paths.empty() &&
                    !r.series.front().paths.front().truth_elevation.empty();
  std::vector<std::string> header{"t_s", "run", "phi_true_rad"};
  if (dual) header.push_back("theta_true_rad");
  for (const auto& l : labels) {
    header.push_back(l + "_phi_rad");
    if (dual) header.push_back(l + "_theta_rad");
    header.push_back(l + "_snr_db");
  }
  csv.row(header);
  const auto& ref = r.series.front().paths;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    for (std::size_t i = 0; i < ref[p].truth.size(); ++i) {
      std::vector<std::string> row{num(r.t[i]), std::to_string(ref[p].run), num(ref[p].truth[i])};
      if (dual) row.push_back(num(ref[p].truth_elevation[i]));
      for (const auto& s : r.series) {
        const SamplePath& sp = s.paths[p];
        row.push_back(num(sp.estimate[i]));
        if (dual) row.push_back(num(sp.estimate_elevation[i]));
        row.push_back(num(to_db(sp.snr[i])));
      }
      csv.row(row);
    }
  }
}

void write_result(const fs::path& dir, const ExperimentResult& r) {
  fs::create_directories(dir);
  const auto labels = column_labels(r);
  write_time_csv(dir / "mse.csv", r, labels,
                 [](const MetricSeries& s, std::size_t i) { return s.mse[i]; });
  write_time_csv(dir / "snr_db.csv", r, labels,
                 [](const MetricSeries& s, std::size_t i) { return to_db(s.snr_inst[i]); });
  write_time_csv(dir / "rate.csv", r, labels,
                 [](const MetricSeries& s, std::size_t i) { return s.rate[i]; });
  write_cdf_csv(dir / "cdf_snr.csv", "snr_db", r, labels, &MetricSeries::cdf_snr_db);
  write_cdf_csv(dir / "cdf_rate.csv", "rate_bps_hz", r, labels, &MetricSeries::cdf_rate);
  if (!r.series.front().paths.empty()) write_paths_csv(dir / "paths.csv", r, labels);
}

std::string short_key(const std::string& key) {
  const auto pos = key.rfind('.');
  return pos == std::string::npos ? key : key.substr(pos + 1);
}

std::vector<std::string> sweep_header(const ExperimentConfig& base) {
  std::vector<std::string> h{"variant"};
  for (const auto& axis : base.sweeps) h.push_back(short_key(axis.key));
  return h;
}

std::vector<std::string> sweep_cells(const Variant& v) {
  std::vector<std::string> c{v.label.empty() ? "base" : v.label};
  for (const auto& [key, value] : v.assignments) c.push_back(value);
  return c;
}

fs::path variant_dir(const fs::path& out, const Variant& v) {
  return v.label.empty() ? out : out / v.label;
}

void run_monte_carlo(const ExperimentConfig& base, const std::vector<Variant>& variants,
                     const fs::path& out, std::ostream& log, bool ideal) {
  Csv summary(out / "summary.csv");
  auto header = sweep_header(base);
  for (const char* h : {"tracker", "pilot_period_s", "mse_avg_rad2", "snr_avg_db",
                        "avg_rate_bps_hz", "divergence_fraction", "kappa_hat"}) {
    header.push_back(h);
  }
  summary.row(header);
  for (const auto& v : variants) {
    RunConfig run = v.config.run;
    if (ideal) {
      run.ideal_pilots = true;
      run.n_runs = 1;
      run.sample_paths = 1;
    }
    const ExperimentResult r = run_experiment(run);
    write_result(variant_dir(out, v), r);
    const auto labels = column_labels(r);
    for (std::size_t i = 0; i < r.series.size(); ++i) {
      const MetricSeries& s = r.series[i];
      auto row = sweep_cells(v);
      for (const auto& c : {labels[i], num(s.pilot_period), num(s.mse_avg), num(s.snr_avg_db),
                            num(s.avg_rate), num(s.divergence_fraction), num(s.kappa_hat)}) {
        row.push_back(c);
      }
      summary.row(row);
      log << (v.label.empty() ? "" : v.label + " ") << labels[i] << ": mse " << s.mse_avg
          << " rad^2, avg SNR " << s.snr_avg_db << " dB, diverged " << s.divergence_fraction
          << "\n";
    }
  }
}

TrackerConfig design_tracker(const ExperimentConfig& cfg, Mode mode, double period) {
  if (cfg.run.trackers.empty()) throw ConfigError("this experiment kind needs one tracker entry");
  TrackerConfig t = cfg.run.trackers.front();
  t.mode = mode;
  t.pilot_period = period;
  return t;
}

RunConfig design_run(const ExperimentConfig& cfg, std::vector<TrackerConfig> trackers) {
  RunConfig run = cfg.run;
  run.trackers = std::move(trackers);
  run.sim_tick_s.reset();
  run.sample_paths = 0;
  return run;
}

void run_overhead_table(const ExperimentConfig& base, const std::vector<Variant>& variants,
                        const fs::path& out, std::ostream& log) {
  Csv csv(out / "table1.csv");
  csv.row({"n_elements", "method", "t_design_d_s", "kappa_hat", "t_design_cd_s",
           "overhead_reduction"});
  (void)base;
  for (const auto& v : variants) {
    const int n = v.config.run.array.n_elements;
    for (const auto& method : v.config.design.methods) {
      DesignInputs d = design_inputs(v.config, n).discrete();
      const double t_d = method == "coherence" ? beam_coherence_time(d) : outage_pilot_period(d);
      const ExperimentResult r = run_experiment(
          design_run(v.config, {design_tracker(v.config, Mode::kContinuousDiscrete, t_d)}));
      const double kappa = r.series.front().kappa_hat;
      const double reduction = overhead_reduction(kappa);
      csv.row({std::to_string(n), method, num(t_d), num(kappa), num(t_d / std::sqrt(kappa)),
               num(reduction)});
      log << "N=" << n << " " << method << ": T_D " << t_d * 1e3 << " ms, kappa " << kappa
          << ", overhead reduction " << reduction * 100.0 << " %\n";
    }
  }
}

void run_effective_rate(const std::vector<Variant>& variants, const fs::path& out,
                        std::ostream& log) {
  Csv csv(out / "effective_rate.csv");
  csv.row({"n_elements", "t_pilot_symbol_s", "tracker", "pilot_period_s", "kappa_hat",
           "outage_rate_bps_hz", "effective_outage_rate_bps_hz", "avg_rate_bps_hz",
           "effective_avg_rate_bps_hz"});
  for (const auto& v : variants) {
    const ExperimentConfig& cfg = v.config;
    const int n = cfg.run.array.n_elements;
    DesignInputs d = design_inputs(cfg, n).discrete();
    const double t_d = outage_pilot_period(d);
    const ExperimentResult at_d =
        run_experiment(design_run(cfg, {design_tracker(cfg, Mode::kDiscrete, t_d),
                                        design_tracker(cfg, Mode::kContinuousDiscrete, t_d)}));
    const double kappa = at_d.series[1].kappa_hat;
    const double t_cd = t_d / std::sqrt(kappa);
    const ExperimentResult at_cd =
        run_experiment(design_run(cfg, {design_tracker(cfg, Mode::kContinuousDiscrete, t_cd)}));
    struct Row {
      const MetricSeries* s;
      double period;
      double kappa;
    };
    const Row rows[] = {{&at_d.series[0], t_d, 1.0}, {&at_cd.series[0], t_cd, kappa}};
    for (double ts : cfg.design.t_pilot_symbols) {
      d.t_pilot_symbol = ts;
      for (const Row& row : rows) {
        const double r_out = outage_rate(d);
        csv.row({std::to_string(n), num(ts), row.s->label, num(row.period), num(row.kappa),
                 num(r_out), num(effective_rate(d, row.period, r_out)), num(row.s->avg_rate),
                 num(effective_rate(d, row.period, row.s->avg_rate))});
      }
    }
    log << "N=" << n << ": T_o(D) " << t_d * 1e3 << " ms, T_o(CD) " << t_cd * 1e3
        << " ms, kappa " << kappa << "\n";
  }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IngestError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedGeometry& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int execute(const YAML::Node& root, const fs::path& out, std::ostream& log) {
  const ExperimentConfig base = parse_experiment(root);
  const std::vector<Variant> variants = expand_sweeps(root);
  fs::create_directories(out);
  write_text(out / "manifest.yaml", emit_experiment(base));
  write_text(out / "plot.py", kPlotScript);
  switch (base.kind) {
    case ExperimentKind::kMonteCarlo:
      run_monte_carlo(base, variants, out, log, false);
      break;
    case ExperimentKind::kIllustrative:
      run_monte_carlo(base, variants, out, log, true);
      break;
    case ExperimentKind::kOverheadTable:
      run_overhead_table(base, variants, out, log);
      break;
    case ExperimentKind::kEffectiveRate:
      run_effective_rate(variants, out, log);
      break;
  }
  return 0;
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.preset && !opts.config) {
      err << "error: simulate needs --preset or --config\n";
      return 2;
    }
    YAML::Node root;
    if (opts.preset) {
      const Preset* p = find_preset(*opts.preset);
      if (!p) {
        err << "error: unknown preset '" << *opts.preset << "'; known presets:";
        for (const auto& q : presets()) err << " " << q.name;
        err << "\n";
        return 2;
      }
      root = parse_yaml_text(std::string(p->yaml), "preset " + std::string(p->name));
    }
    if (opts.config) {
      if (!fs::exists(*opts.config)) {
        err << "error: config file not found: " << opts.config->string() << "\n";
        return 2;
      }
      const YAML::Node file = load_yaml_file(*opts.config);
      root = opts.preset ? merge_yaml(root, file) : file;
    }
    if (opts.seed) root["seed"] = std::to_string(*opts.seed);
    if (opts.runs) root["runs"] = std::to_string(*opts.runs);
    return execute(root, opts.out, out);
  });
}

int cmd_design(const DesignOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.snr_per_element_db && o.snr_total_db) {
      throw ConfigError("give either --snr-per-element-db or --snr-total-db");
    }
    DesignInputs d;
    d.n_elements = o.n_elements;
    d.q_intensity = o.q;
    d.t_lr = o.t_lr_ms / 1e3;
    d.phi_ref = o.phi_ref;
    d.kappa = o.kappa;
    d.mu_zeta = o.mu_zeta;
    d.p_out = o.p_out;
    d.rho = o.snr_total_db ? db_to_linear(*o.snr_total_db)
                           : o.n_elements * db_to_linear(o.snr_per_element_db.value_or(8.0));
    d.rate_fixed = o.rate_fixed ? *o.rate_fixed : o.rate_fraction * max_rate(d.rho);
    d.t_pilot_symbol = o.t_pilot_symbol_us / 1e6;
    d.codebook_levels = o.codebook_levels;
    d.validate();

    const double t_b = beam_coherence_time(d);
    const double t_l = beam_locking_time(d);
    const double to_d = outage_pilot_period(d.discrete());
    const double to_cd = outage_pilot_period(d);
    const double reduction = overhead_reduction(d.kappa);
    const double t_sw = sweep_time(d);
    const double r_out = outage_rate(d);
    const double r_e = effective_rate(d, to_cd, r_out);
    const std::vector<std::pair<std::string, double>> rows{
        {"T_b_s", t_b},           {"T_L_s", t_l},
        {"T_o_D_s", to_d},        {"T_o_CD_s", to_cd},
        {"overhead_reduction", reduction}, {"T_sw_s", t_sw},
        {"rho", d.rho},           {"rate_fixed_bps_hz", d.rate_fixed},
        {"outage_rate_bps_hz", r_out}, {"effective_rate_bps_hz", r_e}};

    out << "beam coherence time T_b      " << t_b * 1e3 << " ms\n"
        << "beam locking time T_L        " << t_l * 1e3 << " ms (kappa " << d.kappa << ")\n"
        << "outage pilot period T_o(D)   " << to_d * 1e3 << " ms\n"
        << "outage pilot period T_o(CD)  " << to_cd * 1e3 << " ms\n"
        << "overhead reduction           " << reduction * 100.0 << " %\n"
        << "sweep time T_sw              " << t_sw * 1e3 << " ms\n"
        << "effective rate R_e at T_o(CD) " << r_e << " bps/Hz (R_f " << d.rate_fixed
        << ", outage rate " << r_out << ")\n";
    if (o.csv) {
      Csv csv(*o.csv);
      csv.row({"quantity", "value"});
      for (const auto& [k, v] : rows) csv.row({k, num(v)});
    }
    return 0;
  });
}

int cmd_trace(const TraceOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.config && !fs::exists(*opts.config)) {
      err << "error: config file not found: " << opts.config->string() << "\n";
      return 2;
    }
    YAML::Node root = parse_yaml_text(std::string(kTraceDefault), "default trace config");
    if (opts.config) root = merge_yaml(root, load_yaml_file(*opts.config));
    if (!fs::exists(opts.trace)) {
      err << "error: trace file not found: " << opts.trace.string() << "\n";
      return 2;
    }
    YAML::Node traj(YAML::NodeType::Map);
    traj["kind"] = "trace";
    traj["path"] = opts.trace.string();
    root["trajectory"] = traj;
    root.remove("sweep");
    if (opts.seed) root["seed"] = std::to_string(*opts.seed);
    root["runs"] = "1";
    root["sample_paths"] = "1";

    ExperimentConfig cfg = parse_experiment(root);
    if (cfg.kind != ExperimentKind::kMonteCarlo) {
      throw ConfigError("trace runs use kind monte_carlo");
    }
    auto& trace = std::get<TraceData>(cfg.run.source.kind);
    std::vector<std::string> warnings;
    if (cfg.run.array.azimuth_only() && trace.has_elevation()) {
      warnings.push_back("azimuth-only array; theta_rad column of " + trace.source + " ignored");
      trace.theta.clear();
    }
    if (trace.span() < cfg.run.duration) {
      warnings.push_back("trace covers " + num(trace.span()) + " s; shortening the run from " +
                         num(cfg.run.duration) + " s");
      cfg.run.duration = trace.span();
    }
    cfg.run.validate();
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    fs::create_directories(opts.out);
    write_text(opts.out / "manifest.yaml", emit_experiment(cfg));
    const ExperimentResult r = run_experiment(cfg.run);
    const auto labels = column_labels(r);
    write_paths_csv(opts.out / "track.csv", r, labels);
    for (std::size_t i = 0; i < r.series.size(); ++i) {
      out << labels[i] << ": mse " << r.series[i].mse_avg << " rad^2, avg SNR "
          << r.series[i].snr_avg_db << " dB\n";
    }
    return 0;
  });
}

}  // namespace beamtrack
