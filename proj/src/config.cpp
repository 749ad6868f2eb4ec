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

#include "beamtrack/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

#include "beamtrack/errors.hpp"

namespace beamtrack {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string position(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  throw ConfigError(position(n) + what);
}

double parse_number(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, "'" + key + "' must be a number");
  const std::string& s = n.Scalar();
  std::string_view v = s;
  bool negative = false;
  if (!v.empty() && (v.front() == '+' || v.front() == '-')) {
    negative = v.front() == '-';
    v.remove_prefix(1);
  }
  if (v == ".inf" || v == ".Inf" || v == ".INF" || v == "inf") return negative ? -kInf : kInf;
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || std::isnan(out)) {
    fail(n, "'" + key + "' must be a number, got '" + s + "'");
  }
  return negative ? -out : out;
}

long long parse_integer(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, "'" + key + "' must be an integer");
  const std::string& s = n.Scalar();
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(n, "'" + key + "' must be an integer, got '" + s + "'");
  }
  return out;
}

int parse_int(const YAML::Node& n, const std::string& key) {
  const long long v = parse_integer(n, key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    fail(n, "'" + key + "' is out of range");
  }
  return static_cast<int>(v);
}

std::string parse_text(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, "'" + key + "' must be a string");
  return n.Scalar();
}

bool parse_flag(const YAML::Node& n, const std::string& key) {
  const std::string s = parse_text(n, key);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(n, "'" + key + "' must be true or false, got '" + s + "'");
}

constexpr std::array<std::pair<std::string_view, double>, 3> kTimeUnits{
    {{"_s", 1.0}, {"_ms", 1e3}, {"_us", 1e6}}};

// A mapping whose keys are checked off as they are read, so leftovers
// (typos, unsupported options) can be reported with their position.
class Section {
 public:
  Section(const YAML::Node& node, std::string name)
      : node_(node.IsDefined() ? node : YAML::Node(YAML::NodeType::Undefined)),
        name_(std::move(name)) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) {
      fail(node_, "'" + name_ + "' must be a mapping");
    }
  }

  YAML::Node get(const std::string& key) {
    used_.insert(key);
    if (!node_.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node& c = node_;
    return c[key];
  }

  std::optional<double> number(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return parse_number(n, key);
  }
  std::optional<int> integer(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return parse_int(n, key);
  }
  std::optional<std::string> text(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return parse_text(n, key);
  }
  std::optional<bool> flag(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n.IsDefined() || n.IsNull()) return std::nullopt;
    return parse_flag(n, key);
  }

  /// A duration given as base_s, base_ms or base_us, in seconds.
  std::optional<double> time(const std::string& base) {
    std::optional<double> out;
    std::string seen;
    for (const auto& [suffix, per_second] : kTimeUnits) {
      const std::string key = base + std::string(suffix);
      const YAML::Node n = get(key);
      if (!n.IsDefined() || n.IsNull()) continue;
      if (out) fail(n, "'" + key + "' conflicts with '" + seen + "'");
      out = parse_number(n, key) / per_second;
      seen = key;
    }
    return out;
  }

  /// Like time() but also accepts a list.
  std::optional<std::vector<double>> times(const std::string& base) {
    std::optional<std::vector<double>> out;
    for (const auto& [suffix, per_second] : kTimeUnits) {
      const std::string key = base + std::string(suffix);
      const YAML::Node n = get(key);
      if (!n.IsDefined() || n.IsNull()) continue;
      if (out) fail(n, "'" + key + "' conflicts with another unit for '" + base + "'");
      std::vector<double> v;
      if (n.IsSequence()) {
        for (const auto& e : n) v.push_back(parse_number(e, key) / per_second);
        if (v.empty()) fail(n, "'" + key + "' must not be empty");
      } else {
        v.push_back(parse_number(n, key) / per_second);
      }
      out = std::move(v);
    }
    return out;
  }

  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!used_.count(key)) fail(kv.first, "unknown key '" + key + "' in " + name_);
    }
  }

 private:
  YAML::Node node_;
  std::string name_;
  std::set<std::string> used_;
};

ArrayConfig parse_array(Section s) {
  ArrayConfig a;
  if (auto g = s.text("geometry")) {
    if (*g == "ula") a.geometry = Geometry::kUla;
    else if (*g == "upa") a.geometry = Geometry::kUpa;
    else fail(s.get("geometry"), "array.geometry must be 'ula' or 'upa', got '" + *g + "'");
  }
  if (auto v = s.integer("n_elements")) a.n_elements = *v;
  if (auto v = s.number("spacing_wavelengths")) a.spacing = *v;
  if (auto v = s.integer("phase_bits")) a.phase_bits = *v;
  if (auto v = s.flag("fixed_elevation")) a.fixed_elevation = *v;
  s.finish();
  return a;
}

ChannelConfig parse_channel(Section s) {
  ChannelConfig c;
  if (auto v = s.number("q_rad2_s3")) c.q_intensity = *v;
  if (auto v = s.number("phi0_rad")) c.phi0 = *v;
  if (auto v = s.number("phidot_init_rad_s")) c.phidot_init = *v;
  c.snr_total_db = s.number("snr_total_db");
  c.snr_per_element_db = s.number("snr_per_element_db");
  c.theta0 = s.number("theta0_rad");
  if (auto v = s.number("thetadot_init_rad_s")) c.thetadot_init = *v;
  c.q_elevation = s.number("q_elevation_rad2_s3");
  s.finish();
  return c;
}

TrackerConfig parse_tracker(Section s) {
  TrackerConfig t;
  if (auto a = s.text("algorithm")) {
    if (*a == "ekf") t.algorithm = Algorithm::kEkf;
    else if (*a == "fbt") t.algorithm = Algorithm::kFbt;
    else if (*a == "ml") t.algorithm = Algorithm::kMl;
    else fail(s.get("algorithm"), "algorithm must be ekf, fbt or ml, got '" + *a + "'");
  }
  if (auto m = s.text("mode")) {
    if (*m == "d") t.mode = Mode::kDiscrete;
    else if (*m == "cd") t.mode = Mode::kContinuousDiscrete;
    else fail(s.get("mode"), "mode must be d or cd, got '" + *m + "'");
  }
  if (auto v = s.time("pilot_period")) t.pilot_period = *v;
  if (auto v = s.integer("n_s")) t.n_s = *v;
  t.q_assumed = s.number("q_assumed_rad2_s3");
  t.q_assumed_elevation = s.number("q_assumed_elevation_rad2_s3");
  t.p0_angle = s.number("p0_angle_rad2");
  t.p0_rate = s.number("p0_rate_rad2_s2");
  s.finish();
  return t;
}

DesignBlock parse_design(Section s) {
  DesignBlock d;
  if (auto v = s.time("t_lr")) d.t_lr = *v;
  if (auto v = s.number("phi_ref_rad")) d.phi_ref = *v;
  if (auto v = s.number("kappa")) d.kappa = *v;
  if (auto v = s.number("mu_zeta")) d.mu_zeta = *v;
  if (auto v = s.number("p_out")) d.p_out = *v;
  d.rate_fixed = s.number("rate_fixed_bps_hz");
  if (auto v = s.number("rate_fraction")) d.rate_fraction = *v;
  if (auto v = s.times("t_pilot_symbol")) d.t_pilot_symbols = *v;
  if (auto v = s.integer("codebook_levels")) d.codebook_levels = *v;
  const YAML::Node m = s.get("methods");
  if (m.IsDefined() && !m.IsNull()) {
    if (!m.IsSequence()) fail(m, "design.methods must be a list");
    d.methods.clear();
    for (const auto& e : m) {
      const std::string name = parse_text(e, "methods");
      if (name != "coherence" && name != "outage") {
        fail(e, "design.methods entries must be 'coherence' or 'outage', got '" + name + "'");
      }
      d.methods.push_back(name);
    }
  }
  s.finish();
  return d;
}

std::vector<SweepAxis> parse_sweeps(const YAML::Node& n) {
  std::vector<SweepAxis> out;
  if (!n.IsDefined() || n.IsNull()) return out;
  if (!n.IsMap()) fail(n, "'sweep' must map dotted keys to lists");
  for (const auto& kv : n) {
    SweepAxis axis;
    axis.key = kv.first.Scalar();
    if (!kv.second.IsSequence() || kv.second.size() == 0) {
      fail(kv.second, "sweep '" + axis.key + "' must be a nonempty list");
    }
    for (const auto& e : kv.second) axis.values.push_back(parse_text(e, axis.key));
    out.push_back(std::move(axis));
  }
  return out;
}

std::vector<std::string> split_dotted(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  return parts;
}

void assign(YAML::Node node, const std::vector<std::string>& path, std::size_t i,
            const std::string& value, const std::string& full_key) {
  if (node.IsSequence()) {
    for (YAML::Node e : node) assign(e, path, i, value, full_key);
    return;
  }
  if (!node.IsMap() && node.IsDefined() && !node.IsNull()) {
    throw ConfigError("sweep key '" + full_key + "' does not name a mapping entry");
  }
  const std::string& key = path[i];
  if (i + 1 == path.size()) {
    // A swept time replaces whichever unit the base config used.
    for (const auto& [suffix, scale] : kTimeUnits) {
      (void)scale;
      if (key.size() > suffix.size() && key.ends_with(suffix)) {
        const std::string base = key.substr(0, key.size() - suffix.size());
        for (const auto& [other, unused] : kTimeUnits) {
          (void)unused;
          node.remove(base + std::string(other));
        }
        break;
      }
    }
    node[key] = value;
    return;
  }
  assign(node[key], path, i + 1, value, full_key);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

void emit_number(YAML::Emitter& e, const char* key, double v) {
  e << YAML::Key << key << YAML::Value << format_double(v);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kMonteCarlo: return "monte_carlo";
    case ExperimentKind::kIllustrative: return "illustrative";
    case ExperimentKind::kOverheadTable: return "overhead_table";
    case ExperimentKind::kEffectiveRate: return "effective_rate";
  }
  return "?";
}

YAML::Node load_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_yaml_text(ss.str(), path.string());
}

YAML::Node parse_yaml_text(const std::string& text, const std::string& source_name) {
  try {
    YAML::Node n = YAML::Load(text);
    if (n.IsNull()) n = YAML::Node(YAML::NodeType::Map);
    if (!n.IsMap()) throw ConfigError(source_name + ": top level must be a mapping");
    return n;
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source_name + ": line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
}

YAML::Node merge_yaml(const YAML::Node& base, const YAML::Node& overlay) {
  if (!base.IsMap() || !overlay.IsMap()) return YAML::Clone(overlay);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : overlay) {
    const std::string key = kv.first.Scalar();
    const YAML::Node& c = out;
    const YAML::Node existing = c[key];
    out[key] = existing.IsDefined() ? merge_yaml(existing, kv.second) : YAML::Clone(kv.second);
  }
  return out;
}

ExperimentConfig parse_experiment(const YAML::Node& root) {
  Section s(root, "config");
  ExperimentConfig cfg;
  if (auto v = s.text("name")) cfg.name = *v;
  if (auto k = s.text("kind")) {
    if (*k == "monte_carlo") cfg.kind = ExperimentKind::kMonteCarlo;
    else if (*k == "illustrative") cfg.kind = ExperimentKind::kIllustrative;
    else if (*k == "overhead_table") cfg.kind = ExperimentKind::kOverheadTable;
    else if (*k == "effective_rate") cfg.kind = ExperimentKind::kEffectiveRate;
    else fail(s.get("kind"), "unknown kind '" + *k + "'");
  }
  RunConfig& run = cfg.run;
  if (const YAML::Node n = s.get("seed"); n.IsDefined() && !n.IsNull()) {
    const long long v = parse_integer(n, "seed");
    if (v < 0) fail(n, "'seed' must be >= 0");
    run.master_seed = static_cast<std::uint64_t>(v);
  }
  if (auto v = s.integer("runs")) run.n_runs = *v;
  if (auto v = s.time("duration")) run.duration = *v;
  run.sim_tick_s = s.time("sim_tick");
  if (auto v = s.integer("metric_substeps")) run.metric_substeps = *v;
  if (auto v = s.integer("sample_paths")) run.sample_paths = *v;
  if (auto v = s.number("cdf_floor_db")) run.cdf_floor_db = *v;
  if (auto v = s.number("cdf_step_db")) run.cdf_step_db = *v;

  run.array = parse_array(Section(s.get("array"), "array"));
  run.channel = parse_channel(Section(s.get("channel"), "channel"));

  Section traj(s.get("trajectory"), "trajectory");
  const std::string kind = traj.text("kind").value_or("brownian");
  if (kind == "brownian") {
    run.source.kind = BrownianRate{};
  } else if (kind == "constant_rate") {
    ConstantRate c;
    const auto kmh = traj.number("speed_km_h");
    const auto ms = traj.number("speed_m_s");
    if (kmh && ms) fail(traj.get("speed_m_s"), "give either speed_km_h or speed_m_s");
    if (!kmh && !ms) fail(root["trajectory"], "constant_rate needs speed_km_h or speed_m_s");
    c.speed_m_s = ms ? *ms : *kmh / 3.6;
    if (auto r = traj.number("range_m")) c.range_m = *r;
    run.source.kind = c;
  } else if (kind == "trace") {
    const auto path = traj.text("path");
    if (!path) fail(root["trajectory"], "trajectory.kind 'trace' needs a path");
    cfg.trace_path = *path;
    run.source.kind = ingest_trace(*path);
  } else {
    fail(traj.get("kind"), "trajectory.kind must be brownian, constant_rate or trace");
  }
  if (kind != "constant_rate") {
    if (traj.get("speed_km_h").IsDefined() || traj.get("speed_m_s").IsDefined() ||
        traj.get("range_m").IsDefined()) {
      fail(root["trajectory"], "speed and range only apply to constant_rate trajectories");
    }
  }
  if (kind != "trace" && traj.get("path").IsDefined()) {
    fail(traj.get("path"), "path only applies to trace trajectories");
  }
  traj.finish();

  const YAML::Node trackers = s.get("trackers");
  if (trackers.IsDefined() && !trackers.IsNull()) {
    if (!trackers.IsSequence()) fail(trackers, "'trackers' must be a list");
    for (const auto& t : trackers) run.trackers.push_back(parse_tracker(Section(t, "tracker")));
  }
  cfg.design = parse_design(Section(s.get("design"), "design"));
  cfg.sweeps = parse_sweeps(s.get("sweep"));
  s.finish();
  return cfg;
}

std::string emit_experiment(const ExperimentConfig& cfg) {
  const RunConfig& run = cfg.run;
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << cfg.name;
  e << YAML::Key << "kind" << YAML::Value << to_string(cfg.kind);
  e << YAML::Key << "seed" << YAML::Value << std::to_string(run.master_seed);
  e << YAML::Key << "runs" << YAML::Value << std::to_string(run.n_runs);
  emit_number(e, "duration_s", run.duration);
  if (run.sim_tick_s) emit_number(e, "sim_tick_s", *run.sim_tick_s);
  e << YAML::Key << "metric_substeps" << YAML::Value << std::to_string(run.metric_substeps);
  e << YAML::Key << "sample_paths" << YAML::Value << std::to_string(run.sample_paths);
  emit_number(e, "cdf_floor_db", run.cdf_floor_db);
  emit_number(e, "cdf_step_db", run.cdf_step_db);

  e << YAML::Key << "array" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "geometry" << YAML::Value
    << (run.array.geometry == Geometry::kUla ? "ula" : "upa");
  e << YAML::Key << "n_elements" << YAML::Value << std::to_string(run.array.n_elements);
  emit_number(e, "spacing_wavelengths", run.array.spacing);
  if (run.array.phase_bits) {
    e << YAML::Key << "phase_bits" << YAML::Value << std::to_string(*run.array.phase_bits);
  }
  e << YAML::Key << "fixed_elevation" << YAML::Value
    << (run.array.fixed_elevation ? "true" : "false");
  e << YAML::EndMap;

  const ChannelConfig& c = run.channel;
  e << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
  emit_number(e, "q_rad2_s3", c.q_intensity);
  emit_number(e, "phi0_rad", c.phi0);
  emit_number(e, "phidot_init_rad_s", c.phidot_init);
  if (c.snr_total_db) emit_number(e, "snr_total_db", *c.snr_total_db);
  if (c.snr_per_element_db) emit_number(e, "snr_per_element_db", *c.snr_per_element_db);
  if (c.theta0) emit_number(e, "theta0_rad", *c.theta0);
  emit_number(e, "thetadot_init_rad_s", c.thetadot_init);
  if (c.q_elevation) emit_number(e, "q_elevation_rad2_s3", *c.q_elevation);
  e << YAML::EndMap;

  e << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  if (const auto* cr = std::get_if<ConstantRate>(&run.source.kind)) {
    e << YAML::Key << "kind" << YAML::Value << "constant_rate";
    emit_number(e, "speed_m_s", cr->speed_m_s);
    emit_number(e, "range_m", cr->range_m);
  } else if (std::holds_alternative<TraceData>(run.source.kind)) {
    e << YAML::Key << "kind" << YAML::Value << "trace";
    e << YAML::Key << "path" << YAML::Value << cfg.trace_path.value_or("");
  } else {
    e << YAML::Key << "kind" << YAML::Value << "brownian";
  }
  e << YAML::EndMap;

  e << YAML::Key << "trackers" << YAML::Value << YAML::BeginSeq;
  for (const auto& t : run.trackers) {
    e << YAML::BeginMap;
    std::string algo = to_string(t.algorithm), mode = to_string(t.mode);
    std::transform(algo.begin(), algo.end(), algo.begin(), ::tolower);
    std::transform(mode.begin(), mode.end(), mode.begin(), ::tolower);
    e << YAML::Key << "algorithm" << YAML::Value << algo;
    e << YAML::Key << "mode" << YAML::Value << mode;
    emit_number(e, "pilot_period_s", t.pilot_period);
    e << YAML::Key << "n_s" << YAML::Value << std::to_string(t.n_s);
    if (t.q_assumed) emit_number(e, "q_assumed_rad2_s3", *t.q_assumed);
    if (t.q_assumed_elevation) emit_number(e, "q_assumed_elevation_rad2_s3", *t.q_assumed_elevation);
    if (t.p0_angle) emit_number(e, "p0_angle_rad2", *t.p0_angle);
    if (t.p0_rate) emit_number(e, "p0_rate_rad2_s2", *t.p0_rate);
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;

  const DesignBlock& d = cfg.design;
  e << YAML::Key << "design" << YAML::Value << YAML::BeginMap;
  emit_number(e, "t_lr_s", d.t_lr);
  emit_number(e, "phi_ref_rad", d.phi_ref);
  emit_number(e, "kappa", d.kappa);
  emit_number(e, "mu_zeta", d.mu_zeta);
  emit_number(e, "p_out", d.p_out);
  if (d.rate_fixed) emit_number(e, "rate_fixed_bps_hz", *d.rate_fixed);
  emit_number(e, "rate_fraction", d.rate_fraction);
  e << YAML::Key << "t_pilot_symbol_s" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double t : d.t_pilot_symbols) e << format_double(t);
  e << YAML::EndSeq;
  e << YAML::Key << "codebook_levels" << YAML::Value << std::to_string(d.codebook_levels);
  e << YAML::Key << "methods" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& m : d.methods) e << m;
  e << YAML::EndSeq;
  e << YAML::EndMap;

  if (!cfg.sweeps.empty()) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    for (const auto& axis : cfg.sweeps) {
      e << YAML::Key << axis.key << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& v : axis.values) e << v;
      e << YAML::EndSeq;
    }
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::vector<Variant> expand_sweeps(const YAML::Node& root) {
  const ExperimentConfig base = parse_experiment(root);
  if (base.sweeps.empty()) return {Variant{"", {}, base}};

  std::vector<Variant> out;
  std::vector<std::size_t> index(base.sweeps.size(), 0);
  while (true) {
    Variant v;
    YAML::Node node = YAML::Clone(root);
    node.remove("sweep");
    std::string label;
    for (std::size_t a = 0; a < base.sweeps.size(); ++a) {
      const SweepAxis& axis = base.sweeps[a];
      const std::string& value = axis.values[index[a]];
      const auto path = split_dotted(axis.key);
      if (path.empty()) throw ConfigError("empty sweep key");
      assign(node, path, 0, value, axis.key);
      v.assignments.emplace_back(axis.key, value);
      if (!label.empty()) label += "_";
      label += sanitize(path.back() + "=" + value);
    }
    v.label = label;
    try {
      v.config = parse_experiment(node);
    } catch (const ConfigError& e) {
      throw ConfigError("sweep variant " + label + ": " + e.what());
    }
    out.push_back(std::move(v));

    std::size_t a = base.sweeps.size();
    while (a > 0) {
      --a;
      if (++index[a] < base.sweeps[a].values.size()) break;
      index[a] = 0;
      if (a == 0) return out;
    }
  }
}

DesignInputs design_inputs(const ExperimentConfig& cfg, int n_elements) {
  const DesignBlock& b = cfg.design;
  DesignInputs d;
  d.n_elements = n_elements;
  d.q_intensity = cfg.run.channel.q_intensity;
  d.t_lr = b.t_lr;
  d.phi_ref = b.phi_ref;
  d.kappa = b.kappa;
  d.mu_zeta = b.mu_zeta;
  d.p_out = b.p_out;
  d.rho = cfg.run.channel.rho(n_elements);
  d.rate_fixed = b.rate_fixed ? *b.rate_fixed : b.rate_fraction * max_rate(d.rho);
  d.t_pilot_symbol = b.t_pilot_symbols.front();
  d.codebook_levels = b.codebook_levels;
  return d;
}

}  // namespace beamtrack
