// Copyright 2026 The fockchannel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fockchannel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fockchannel/charfunc.hpp"

namespace fockchannel {

using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Names

template <typename E, std::size_t N>
std::optional<E> lookup(std::string_view text, const std::pair<std::string_view, E> (&table)[N]) {
  for (const auto& [name, value] : table)
    if (name == text) return value;
  return std::nullopt;
}

constexpr std::pair<std::string_view, Command> kCommands[] = {
    {"channel", Command::Channel}, {"control", Command::Control},   {"raman", Command::Raman},
    {"stats", Command::Stats},     {"charfunc", Command::Charfunc}, {"verify", Command::Verify},
    {"sweep", Command::Sweep}};
constexpr std::pair<std::string_view, CharStage> kStages[] = {{"input", CharStage::Input},
                                                              {"splitter", CharStage::Splitter},
                                                              {"absorber", CharStage::Absorber},
                                                              {"output", CharStage::Output}};
constexpr std::pair<std::string_view, AbsorberModel> kModels[] = {{"analytic", AbsorberModel::Analytic},
                                                                  {"lindblad", AbsorberModel::Lindblad}};
constexpr std::pair<std::string_view, SplitterOrientation> kOrientations[] = {
    {"inverse", SplitterOrientation::Inverse}, {"same", SplitterOrientation::Same}};
constexpr std::pair<std::string_view, OutputFormat> kFormats[] = {{"json", OutputFormat::Json},
                                                                  {"csv", OutputFormat::Csv}};

const std::set<std::string, std::less<>> kIntegerSweepKeys = {"n", "n_max", "atoms"};
const std::set<std::string, std::less<>> kSweepKeys = {"alpha", "n",       "theta",      "g",        "f",
                                                       "Mz",    "R",       "N_occ",      "gamma",    "z",
                                                       "v",     "Omega",   "omega0",     "dt",       "n_max",
                                                       "atoms", "relaxation", "duration"};

// ---------------------------------------------------------------------------
// Value parsing

[[noreturn]] void fail(std::string_view key, const std::string& what) {
  throw ConfigError(std::string(key) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    fail(key, "cannot parse '" + std::string(text) + "' as a finite real number");
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    fail(key, "cannot parse '" + std::string(text) + "' as an integer");
  return value;
}

Complex parse_complex(std::string_view key, std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {parse_real(key, text), 0.0};
  return {parse_real(key, text.substr(0, comma)), parse_real(key, text.substr(comma + 1))};
}

template <typename E, std::size_t N>
E parse_enum(std::string_view key, std::string_view text, const std::pair<std::string_view, E> (&table)[N]) {
  if (auto value = lookup(trim(text), table)) return *value;
  std::string names;
  for (const auto& entry : table) names += (names.empty() ? "" : "|") + std::string(entry.first);
  fail(key, "must be one of " + names + " (got '" + std::string(text) + "')");
}

void require(bool ok, std::string_view key, std::string_view invariant, std::string_view got) {
  if (!ok) fail(key, "invariant " + std::string(invariant) + " violated (got " + std::string(got) + ")");
}

// ---------------------------------------------------------------------------
// Resolution helpers

class Entries {
 public:
  explicit Entries(const std::map<std::string, std::string>& map) : map_(map) {}

  bool has(std::string_view key) const { return map_.find(std::string(key)) != map_.end(); }
  std::optional<std::string_view> raw(std::string_view key) const {
    const auto it = map_.find(std::string(key));
    if (it == map_.end()) return std::nullopt;
    return std::string_view(it->second);
  }
  std::optional<double> real(std::string_view key) const {
    if (auto r = raw(key)) return parse_real(key, *r);
    return std::nullopt;
  }
  std::optional<int> integer(std::string_view key) const {
    if (auto r = raw(key)) return parse_int(key, *r);
    return std::nullopt;
  }
  /// Integer that may also be "auto".
  std::optional<int> auto_integer(std::string_view key) const {
    auto r = raw(key);
    if (!r || trim(*r) == "auto") return std::nullopt;
    return parse_int(key, *r);
  }
  std::optional<double> auto_real(std::string_view key) const {
    auto r = raw(key);
    if (!r || trim(*r) == "auto") return std::nullopt;
    return parse_real(key, *r);
  }

 private:
  const std::map<std::string, std::string>& map_;
};

std::string fmt_int(int x) { return std::to_string(x); }

// Converts library validation failures into config diagnostics.
template <typename F>
auto validated(std::string_view what, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Command command) {
  for (const auto& [name, value] : kCommands)
    if (value == command) return name;
  return "?";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Json ? "json" : "csv"; }

std::string_view to_string(CharStage stage) {
  for (const auto& [name, value] : kStages)
    if (value == stage) return name;
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "command", "alpha",        "n",           "theta",       "g",          "f",
      "Mz",      "R",            "N_occ",       "gamma",       "z",          "v",
      "epsilon", "Omega",        "omega0",      "n_max",       "margin",     "n_max_cap",
      "model",   "dt",           "second_splitter", "leakage_threshold", "atoms", "relaxation",
      "duration", "samples",     "stage",       "grid_points", "beta_max",   "phase1",
      "phase2",  "sweep_param",  "sweep_start", "sweep_stop",  "sweep_count", "sweep_command",
      "out",     "format"};
  return keys;
}

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

SchemeParams RunConfig::scheme() const { return SchemeParams(g, f, theta); }

AbsorberParams RunConfig::absorber() const {
  const SchemeParams s = scheme();
  if (Mz) return AbsorberParams::from_decay(*Mz, s, v);
  if (R) return AbsorberParams::from_absorption(*R, z, s, v);
  if (N_occ && gamma) return AbsorberParams::from_medium(*N_occ, *gamma, z, s, v);
  throw ConfigError("absorber: set Mz, or R (with optional z), or N_occ and gamma (with optional z)");
}

ChannelOptions RunConfig::channel_options() const {
  ChannelOptions o;
  o.model = model;
  o.dt = dt;
  o.n_max = n_max;
  o.margin = margin;
  o.cutoff_cap = n_max_cap;
  o.leakage_threshold = leakage_threshold;
  o.second_splitter = second_splitter;
  return o;
}

FrequencySpec RunConfig::frequencies() const { return FrequencySpec::resonant(omega0, Omega, epsilon); }

RunConfig resolve_config(const std::map<std::string, std::string>& map) {
  const std::vector<std::string>& known = config_keys();
  for (const auto& [key, value] : map)
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown key '" + key + "'");

  const Entries e(map);
  RunConfig c;
  c.entries = map;

  const auto command = e.raw("command");
  if (!command) throw ConfigError("command: missing (one of channel|control|raman|stats|charfunc|verify|sweep)");
  c.command = parse_enum("command", *command, kCommands);

  if (auto r = e.raw("alpha")) c.alpha = parse_complex("alpha", *r);
  c.n = e.integer("n").value_or(0);
  require(c.n >= 0, "n", "n >= 0", fmt_int(c.n));

  // Scheme: explicit (g, f, theta), couplings matched by angle, or angle alone.
  const auto theta = e.real("theta");
  const auto g = e.real("g");
  const auto f = e.real("f");
  if (g.has_value() != f.has_value()) throw ConfigError("g, f: must be given together");
  const SchemeParams scheme = validated("scheme", [&] {
    if (g && theta) return SchemeParams(*g, *f, *theta);
    if (g) return SchemeParams::matched_to(*g, *f);
    if (theta) return SchemeParams::from_angle(*theta);
    return SchemeParams::matched_to(std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0);
  });
  c.theta = scheme.theta();
  c.g = scheme.g();
  c.f = scheme.f();

  // Absorber source.
  c.Mz = e.real("Mz");
  c.R = e.real("R");
  c.N_occ = e.real("N_occ");
  c.gamma = e.real("gamma");
  if (c.Mz && (c.R || c.N_occ || c.gamma || e.has("z")))
    throw ConfigError("Mz: excludes R, N_occ, gamma and z (Mz fixes the decay length)");
  if (c.R && (c.N_occ || c.gamma)) throw ConfigError("R: excludes N_occ and gamma");
  if (c.N_occ.has_value() != c.gamma.has_value()) throw ConfigError("N_occ, gamma: must be given together");
  if (c.Mz) require(*c.Mz >= 0.0, "Mz", "Mz >= 0", format_real(*c.Mz));
  if (c.R) require(*c.R >= 0.0, "R", "R >= 0", format_real(*c.R));
  if (c.N_occ) require(*c.N_occ >= 0.0, "N_occ", "N_occ >= 0", format_real(*c.N_occ));
  if (c.gamma) require(*c.gamma > 0.0, "gamma", "gamma > 0", format_real(*c.gamma));
  c.z = e.real("z").value_or(1.0);
  require(c.z >= 0.0, "z", "z >= 0", format_real(c.z));
  c.v = e.real("v").value_or(1.0);
  require(c.v > 0.0, "v", "v > 0", format_real(c.v));

  c.epsilon = e.integer("epsilon").value_or(0);
  require(c.epsilon >= -1 && c.epsilon <= 1, "epsilon", "epsilon in {-1, 0, 1}", fmt_int(c.epsilon));
  c.Omega = e.real("Omega").value_or(0.0);
  require(c.Omega >= 0.0, "Omega", "Omega >= 0", format_real(c.Omega));
  c.omega0 = e.real("omega0").value_or(1.0);
  require(c.omega0 > 0.0, "omega0", "omega0 > 0", format_real(c.omega0));

  c.n_max = e.auto_integer("n_max");
  c.margin = e.integer("margin").value_or(kDefaultMargin);
  require(c.margin >= 1, "margin", "margin >= 1", fmt_int(c.margin));
  if (c.n_max) require(*c.n_max > c.margin, "n_max", "n_max > margin", fmt_int(*c.n_max));
  c.n_max_cap = e.integer("n_max_cap").value_or(kDefaultCutoffCap);
  require(c.n_max_cap > c.margin, "n_max_cap", "n_max_cap > margin", fmt_int(c.n_max_cap));
  if (auto r = e.raw("model")) c.model = parse_enum("model", *r, kModels);
  c.dt = e.real("dt").value_or(1e-2);
  require(c.dt > 0.0, "dt", "dt > 0", format_real(c.dt));
  if (auto r = e.raw("second_splitter")) c.second_splitter = parse_enum("second_splitter", *r, kOrientations);
  c.leakage_threshold = e.real("leakage_threshold").value_or(kDefaultLeakageThreshold);
  require(c.leakage_threshold > 0.0, "leakage_threshold", "leakage_threshold > 0", format_real(c.leakage_threshold));

  c.atoms = e.integer("atoms").value_or(2);
  require(c.atoms >= 1 && c.atoms <= kMaxAtoms, "atoms", "1 <= atoms <= 3", fmt_int(c.atoms));
  c.relaxation = e.real("relaxation").value_or(0.0);
  require(c.relaxation >= 0.0, "relaxation", "relaxation >= 0", format_real(c.relaxation));
  c.duration = e.auto_real("duration");
  if (c.duration) require(*c.duration > 0.0, "duration", "duration > 0", format_real(*c.duration));
  c.samples = e.integer("samples").value_or(50);
  require(c.samples >= 1, "samples", "samples >= 1", fmt_int(c.samples));

  if (auto r = e.raw("stage")) c.stage = parse_enum("stage", *r, kStages);
  c.grid_points = e.integer("grid_points").value_or(11);
  require(c.grid_points >= 1, "grid_points", "grid_points >= 1", fmt_int(c.grid_points));
  c.beta_max = e.real("beta_max").value_or(kCharfuncBound);
  require(c.beta_max >= 0.0 && c.beta_max <= kCharfuncBound, "beta_max", "0 <= beta_max <= 2",
          format_real(c.beta_max));
  c.phase1 = e.real("phase1").value_or(0.0);
  c.phase2 = e.real("phase2").value_or(0.0);

  const bool sweep = c.command == Command::Sweep;
  for (std::string_view key : {"sweep_param", "sweep_start", "sweep_stop", "sweep_count", "sweep_command"})
    if (!sweep && e.has(key)) fail(key, "only valid with command = sweep");
  if (sweep) {
    for (std::string_view key : {"sweep_param", "sweep_start", "sweep_stop", "sweep_count"})
      if (!e.has(key)) fail(key, "required for command = sweep");
    c.sweep_param = std::string(trim(*e.raw("sweep_param")));
    if (!kSweepKeys.count(c.sweep_param)) fail("sweep_param", "'" + c.sweep_param + "' is not a numeric sweepable key");
    c.sweep_start = *e.real("sweep_start");
    c.sweep_stop = *e.real("sweep_stop");
    c.sweep_count = *e.integer("sweep_count");
    require(c.sweep_count >= 1, "sweep_count", "sweep_count >= 1", fmt_int(c.sweep_count));
    if (auto r = e.raw("sweep_command")) c.sweep_command = parse_enum("sweep_command", *r, kCommands);
    if (c.sweep_command == Command::Sweep || c.sweep_command == Command::Charfunc)
      fail("sweep_command", "must be one of channel|control|raman|stats|verify");
  }

  if (auto r = e.raw("out")) c.out = std::string(trim(*r));
  c.format = c.command == Command::Charfunc ? OutputFormat::Csv : OutputFormat::Json;
  if (auto r = e.raw("format")) c.format = parse_enum("format", *r, kFormats);

  // Owning-type invariants of the physical parameters.
  if (c.Mz || c.R || c.N_occ) validated("absorber", [&] { return c.absorber(); });
  validated("frequencies", [&] { return c.frequencies(); });
  return c;
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  std::map<std::string, std::string> map;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(where + "unknown key '" + key + "'");
    if (!map.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
  }
  for (const auto& [key, value] : overrides) {
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("--" + key + ": unknown key");
    map[key] = std::string(trim(value));
  }
  return resolve_config(map);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

Json real(double x) { return format_real(x); }

std::string format_complex(Complex z) { return format_real(z.real()) + "," + format_real(z.imag()); }

Json config_json(const RunConfig& c) {
  const bool sweep = c.command == Command::Sweep;
  auto opt = [](const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); };
  const bool has_z = !c.Mz && (c.R || c.N_occ);
  Json j;
  j["command"] = to_string(c.command);
  j["alpha"] = format_complex(c.alpha);
  j["n"] = c.n;
  j["theta"] = real(c.theta);
  j["g"] = real(c.g);
  j["f"] = real(c.f);
  j["Mz"] = opt(c.Mz);
  j["R"] = opt(c.R);
  j["N_occ"] = opt(c.N_occ);
  j["gamma"] = opt(c.gamma);
  j["z"] = has_z ? real(c.z) : Json(nullptr);
  j["v"] = real(c.v);
  j["epsilon"] = c.epsilon;
  j["Omega"] = real(c.Omega);
  j["omega0"] = real(c.omega0);
  j["n_max"] = c.n_max ? Json(*c.n_max) : Json("auto");
  j["margin"] = c.margin;
  j["n_max_cap"] = c.n_max_cap;
  j["model"] = to_string(c.model);
  j["dt"] = real(c.dt);
  j["second_splitter"] = to_string(c.second_splitter);
  j["leakage_threshold"] = real(c.leakage_threshold);
  j["atoms"] = c.atoms;
  j["relaxation"] = real(c.relaxation);
  j["duration"] = c.duration ? real(*c.duration) : Json("auto");
  j["samples"] = c.samples;
  j["stage"] = to_string(c.stage);
  j["grid_points"] = c.grid_points;
  j["beta_max"] = real(c.beta_max);
  j["phase1"] = real(c.phase1);
  j["phase2"] = real(c.phase2);
  j["sweep_param"] = sweep ? Json(c.sweep_param) : Json(nullptr);
  j["sweep_start"] = sweep ? real(c.sweep_start) : Json(nullptr);
  j["sweep_stop"] = sweep ? real(c.sweep_stop) : Json(nullptr);
  j["sweep_count"] = sweep ? Json(c.sweep_count) : Json(nullptr);
  j["sweep_command"] = sweep ? Json(to_string(c.sweep_command)) : Json(nullptr);
  j["out"] = c.out.empty() ? Json(nullptr) : Json(c.out);
  j["format"] = to_string(c.format);
  return j;
}

Json stats_json(const StatsReport& s) {
  Json j;
  j["mean_a"] = real(s.mean_a);
  j["mean_b"] = real(s.mean_b);
  j["mandel_a"] = real(s.mandel_a);
  j["mandel_b"] = real(s.mandel_b);
  j["covariance"] = real(s.covariance);
  j["sum_variance"] = real(s.sum_variance);
  j["diff_variance"] = real(s.diff_variance);
  j["shot_level"] = real(s.shot_level);
  j["min_quadrature_variance"] = real(s.min_quadrature_variance);
  j["C"] = real(s.C);
  return j;
}

Json echo_json(const RunEcho& e) {
  Json j;
  j["command"] = e.command;
  j["alpha_re"] = real(e.alpha.real());
  j["alpha_im"] = real(e.alpha.imag());
  j["n"] = e.n;
  j["g"] = real(e.g);
  j["f"] = real(e.f);
  j["theta"] = real(e.theta);
  j["c"] = real(e.c);
  j["s"] = real(e.s);
  j["R"] = real(e.R);
  j["N_occ"] = real(e.N_occ);
  j["gamma"] = real(e.gamma);
  j["z"] = real(e.z);
  j["v"] = real(e.v);
  j["M"] = real(e.M);
  j["q"] = real(e.q);
  j["model"] = e.model;
  j["second_splitter"] = e.second_splitter;
  j["n_max"] = e.n_max;
  j["margin"] = e.margin;
  j["dt"] = real(e.dt);
  j["epsilon"] = e.epsilon;
  j["Omega"] = real(e.Omega);
  j["omega_0"] = real(e.omega_0);
  j["omega_a"] = real(e.omega_a);
  j["omega_b"] = real(e.omega_b);
  return j;
}

Json channel_json(const ChannelReport& r, bool contract_ok) {
  Json j;
  j["fidelity_b"] = real(r.fidelity_b);
  j["amplitude_a_out_re"] = real(r.amplitude_a_out.real());
  j["amplitude_a_out_im"] = real(r.amplitude_a_out.imag());
  j["expected_amplitude_re"] = real(r.expected_amplitude.real());
  j["expected_amplitude_im"] = real(r.expected_amplitude.imag());
  j["amplitude_error"] = real(std::abs(r.amplitude_a_out - r.expected_amplitude));
  j["mean_b_out"] = real(r.mean_b_out);
  j["leakage"] = real(r.leakage);
  j["contract_ok"] = contract_ok;
  j["stats"] = stats_json(r.stats);
  j["params"] = echo_json(r.params);
  return j;
}

FockCutoff input_cutoff(const RunConfig& c) {
  return c.n_max ? FockCutoff(*c.n_max, c.margin) : FockCutoff::for_input(c.alpha, c.n, c.margin, c.n_max_cap);
}

Json run_channel_like(const RunConfig& c, bool& ok) {
  ChannelReport report;
  if (c.command == Command::Control) {
    const FockCutoff cutoff = c.n_max ? FockCutoff(*c.n_max, c.margin) : FockCutoff(c.n + c.margin + 10, c.margin);
    report = run_control(c.n, c.absorber(), cutoff);
    return channel_json(report, true);
  }
  if (c.command == Command::Raman)
    report = run_raman_variant(c.alpha, c.n, c.scheme(), c.absorber(), c.frequencies(), c.channel_options());
  else
    report = run_channel(c.alpha, c.n, c.scheme(), c.absorber(), c.channel_options());
  ok = report.meets_contract(model_tolerance(c.model));
  Json j = channel_json(report, ok);
  if (c.command == Command::Raman) {
    const EquivalentScheme eq = unitary_equivalent_scheme(c.scheme(), c.frequencies());
    j["frame_angle"] = real(eq.frame_angle(c.absorber().duration()));
  }
  return j;
}

Json run_stats(const RunConfig& c) {
  const SchemeParams scheme = c.scheme();
  const double cc = scheme.c();
  const double ss = scheme.s();
  const FockCutoff cutoff = input_cutoff(c);
  const TwoModeState state = build_A_state(c.alpha, c.n, cc, ss, cutoff);
  const auto [qa, qb] = mandel_closed_form(c.alpha, c.n, cc, ss);
  Json j = stats_json(compute_stats(state));
  j["mandel_a_closed_form"] = real(qa);
  j["mandel_b_closed_form"] = real(qb);
  j["covariance_closed_form"] = real(covariance_closed_form(c.alpha, c.n, cc, ss));
  j["C_expected"] = real(2.0 * (1.0 + c.n));
  j["sum_variance_expected"] = real(std::norm(c.alpha));
  j["epr_overlap"] = real(epr_form_check(c.alpha, cutoff));
  j["leakage"] = real(state.leakage());
  j["n_max"] = cutoff.n_max();
  j["contract_ok"] = true;
  return j;
}

// Probe with a populated r mode and a nonzero tau amplitude, atoms in the ground state.
TwoModeState verify_probe(const FockCutoff& cutoff) {
  Vector psi = Vector::Zero(cutoff.dim());
  psi(cutoff.index(0, 0)) = 1.0;
  psi(cutoff.index(1, 0)) = 1.0;
  psi(cutoff.index(0, 1)) = kI;
  psi(cutoff.index(1, 1)) = 1.0;
  return TwoModeState::pure(psi.normalized(), cutoff);
}

Json run_verify(const RunConfig& c, bool& ok) {
  const FockCutoff cutoff(c.n_max.value_or(6), c.margin);
  check_micro_budget(c.atoms, cutoff);
  MicroModel model;
  model.atom_count = c.atoms;
  model.g = c.g;
  model.f = c.f;
  model.relaxation_rate = c.relaxation;
  model.duration = c.duration.value_or(2.0 * std::numbers::pi / std::hypot(c.g, c.f));

  const Matrix H = micro_hamiltonian(model, cutoff);
  const std::vector<Index> safe = joint_safe_indices(cutoff, c.atoms);
  const auto [r_mode, tau_mode] = collective_modes(c.g, c.f, cutoff);
  const TwoModeState probe = verify_probe(cutoff);

  struct Tracked {
    Matrix Z, number;
    Complex z0, n0;
    double mean_drift = 0.0, number_drift = 0.0;
  };
  auto track = [&](const Matrix& mode) {
    Tracked t;
    t.Z = joint_field_operator(mode, c.atoms);
    t.number = t.Z.adjoint() * t.Z;
    return t;
  };
  Tracked tau = track(tau_mode.matrix);
  Tracked r = track(r_mode.matrix);

  MicroOptions options;
  options.dt = c.dt;
  options.samples = c.samples;
  bool first = true;
  microscopic_evolve(probe, model, options, [&](double, const JointState& s) {
    for (Tracked* t : {&tau, &r}) {
      const Complex z = s.expectation(t->Z);
      const Complex n = s.expectation(t->number);
      if (first) {
        t->z0 = z;
        t->n0 = n;
      }
      t->mean_drift = std::max(t->mean_drift, std::abs(z - t->z0));
      t->number_drift = std::max(t->number_drift, std::abs(n - t->n0));
    }
    first = false;
  });

  auto mode_json = [&](const Tracked& t) {
    Json j;
    j["commutator_norm"] = real(restricted_norm(H * t.Z - t.Z * H, safe));
    j["dynamic_drift"] = real(t.mean_drift);
    j["number_drift"] = real(t.number_drift);
    return j;
  };
  Json j;
  j["tau"] = mode_json(tau);
  j["r"] = mode_json(r);
  j["n_max"] = cutoff.n_max();
  j["duration"] = real(model.duration);
  const double tau_comm = restricted_norm(H * tau.Z - tau.Z * H, safe);
  const double r_comm = restricted_norm(H * r.Z - r.Z * H, safe);
  ok = tau_comm <= 1e-10 && tau.mean_drift <= 1e-8 && tau.number_drift <= 1e-8 && r_comm > 0.1;
  j["contract_ok"] = ok;
  return j;
}

Json run_single(const RunConfig& c, bool& ok) {
  ok = true;
  switch (c.command) {
    case Command::Channel:
    case Command::Control:
    case Command::Raman:
      return run_channel_like(c, ok);
    case Command::Stats:
      return run_stats(c);
    case Command::Verify:
      return run_verify(c, ok);
    default:
      throw ConfigError("command: '" + std::string(to_string(c.command)) + "' has no single-report form");
  }
}

TwoModeState charfunc_state(const RunConfig& c) {
  const FockCutoff cutoff = input_cutoff(c);
  const TwoModeState input = build_input_state(c.alpha, c.n, cutoff);
  switch (c.stage) {
    case CharStage::Input:
      return input;
    case CharStage::Splitter: {
      const TwoModeState out =
          TwoModeState::pure(beamsplitter_sparse(c.theta, cutoff) * input.vector(), cutoff);
      if (out.leakage() > c.leakage_threshold)
        throw CutoffError("charfunc: leakage after the splitter exceeds the threshold");
      return out;
    }
    case CharStage::Absorber:
      return propagate_scheme(c.alpha, c.n, c.scheme(), c.absorber(), c.channel_options()).absorber_output;
    case CharStage::Output:
      break;
  }
  return propagate_scheme(c.alpha, c.n, c.scheme(), c.absorber(), c.channel_options()).output;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object())
      flatten(value, name, out);
    else if (value.is_string())
      out.emplace_back(name, value.get<std::string>());
    else if (value.is_null())
      out.emplace_back(name, "");
    else
      out.emplace_back(name, value.dump());
  }
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
  return line + "\n";
}

std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

RunOutput run_charfunc(const RunConfig& c) {
  const TwoModeState state = charfunc_state(c);
  const auto b1 = grid_axis(c.grid_points, c.beta_max, c.phase1);
  const auto b2 = grid_axis(c.grid_points, c.beta_max, c.phase2);
  const CharGrid grid = charfunc_grid(state, b1, b2);
  RunOutput out;
  if (c.format == OutputFormat::Csv) {
    std::string text = "beta1_re,beta1_im,beta2_re,beta2_im,value_re,value_im\n";
    for (const CharSample& s : grid.samples)
      text += csv_line({format_real(s.beta1.real()), format_real(s.beta1.imag()), format_real(s.beta2.real()),
                        format_real(s.beta2.imag()), format_real(s.value.real()), format_real(s.value.imag())});
    out.text = std::move(text);
    return out;
  }
  Json samples = Json::array();
  for (const CharSample& s : grid.samples)
    samples.push_back(Json{{"beta1_re", real(s.beta1.real())}, {"beta1_im", real(s.beta1.imag())},
                           {"beta2_re", real(s.beta2.real())}, {"beta2_im", real(s.beta2.imag())},
                           {"value_re", real(s.value.real())}, {"value_im", real(s.value.imag())}});
  Json report;
  report["stage"] = to_string(c.stage);
  report["n_max"] = state.cutoff().n_max();
  report["leakage"] = real(state.leakage());
  report["samples"] = std::move(samples);
  out.text = render_json(Json{{"command", "charfunc"}, {"config", config_json(c)}, {"report", std::move(report)}});
  return out;
}

std::string sweep_value_text(const RunConfig& c, double x) {
  if (!kIntegerSweepKeys.count(c.sweep_param)) return format_real(x);
  const double rounded = std::round(x);
  if (std::abs(x - rounded) > 1e-9)
    fail("sweep_param", "'" + c.sweep_param + "' takes integers but the sweep hits " + format_real(x));
  return std::to_string(static_cast<long long>(rounded));
}

RunOutput run_sweep(const RunConfig& c) {
  std::map<std::string, std::string> base = c.entries;
  for (const char* key : {"sweep_param", "sweep_start", "sweep_stop", "sweep_count", "sweep_command", "out", "format"})
    base.erase(key);
  base["command"] = std::string(to_string(c.sweep_command));

  RunOutput out;
  Json points = Json::array();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  for (int i = 0; i < c.sweep_count; ++i) {
    const double x = c.sweep_count == 1 ? c.sweep_start
                                        : c.sweep_start + (c.sweep_stop - c.sweep_start) * i / (c.sweep_count - 1);
    std::map<std::string, std::string> entries = base;
    const std::string value = sweep_value_text(c, x);
    entries[c.sweep_param] = value;
    const RunConfig point = resolve_config(entries);
    bool ok = true;
    Json report = run_single(point, ok);
    out.contract_ok = out.contract_ok && ok;

    std::vector<std::pair<std::string, std::string>> cells;
    flatten(report, "", cells);
    if (header.empty()) {
      header.push_back(c.sweep_param);
      for (const auto& cell : cells) header.push_back(cell.first);
    }
    std::vector<std::string> row{value};
    for (const auto& cell : cells) row.push_back(cell.second);
    rows.push_back(std::move(row));
    points.push_back(Json{{"value", value}, {"config", config_json(point)}, {"report", std::move(report)}});
  }
  if (c.format == OutputFormat::Csv) {
    out.text = csv_line(header);
    for (const auto& row : rows) out.text += csv_line(row);
  } else {
    out.text = render_json(Json{{"command", "sweep"}, {"config", config_json(c)}, {"points", std::move(points)}});
  }
  return out;
}

}  // namespace

RunOutput run_config(const RunConfig& c) {
  if (c.command == Command::Charfunc) return run_charfunc(c);
  if (c.command == Command::Sweep) return run_sweep(c);
  RunOutput out;
  Json report = run_single(c, out.contract_ok);
  if (c.format == OutputFormat::Csv) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(report, "", cells);
    std::vector<std::string> header, row;
    for (auto& [k, v] : cells) {
      header.push_back(k);
      row.push_back(v);
    }
    out.text = csv_line(header) + csv_line(row);
  } else {
    out.text = render_json(
        Json{{"command", to_string(c.command)}, {"config", config_json(c)}, {"report", std::move(report)}});
  }
  return out;
}

int execute(const RunConfig& config, std::ostream& stdout_stream, std::ostream& diagnostics) {
  RunOutput output;
  try {
    output = run_config(config);
  } catch (const ValidationError& e) {
    diagnostics << "error: " << e.what() << "\n";
    return 1;
  } catch (const DimensionError& e) {
    diagnostics << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    diagnostics << "numerical failure: " << e.what() << "\n";
    return 2;
  }

  if (config.out.empty()) {
    stdout_stream << output.text;
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file || !(file << output.text)) {
      diagnostics << "error: out: cannot write '" << config.out << "'\n";
      return 1;
    }
  }
  if (!output.contract_ok) {
    diagnostics << "contract not met: see contract_ok in the report\n";
    return 2;
  }
  return 0;
}

}  // namespace fockchannel
