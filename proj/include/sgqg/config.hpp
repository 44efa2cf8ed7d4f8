// Copyright 2026 The SGQG Authors
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

// Run configuration for the command-line tool. The file is JSON; every key
// is optional and unknown keys are rejected with the offending path. The
// resolved document (defaults filled in) round-trips through load_config
// and its canonical dump is hashed into every artifact.

#pragma once

#include "sgqg/error_model.hpp"
#include "sgqg/gates.hpp"
#include "sgqg/io.hpp"
#include "sgqg/phases.hpp"
#include "sgqg/propagator.hpp"
#include "sgqg/schedules.hpp"
#include "sgqg/sweeps.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sgqg {

/// Bad configuration; `field` is the dotted path of the culprit.
struct ConfigError : Error {
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Units { Angular, Cycles };

struct AxisSpec {
  double min = -0.2;
  double max = 0.2;
  int points = 41;
  std::vector<double> values() const { return linspace(min, max, points); }
};

struct RunConfig {
  struct Physics {
    Units units = Units::Angular;
    double omega0 = 0.0;  // rad/us (angular) or MHz (cycles)
    double delta0 = 0.0;
    double tau = 0.16;  // us in both modes
    double a_hf = 0.0;
    int hyperfine_sign = 1;
  } physics;
  struct Gate {
    GateFamily family = GateFamily::SGQG;
    Program program = Program::U1;
    double gamma = 0.5 * kPi;
    double phi1 = 0.0;
    bool two_qubit = false;
    double slowdown = 10.0;
    double holonomic_ratio = 1.134;
  } gate;
  struct Errors {
    AmplitudeErrorMode mode = AmplitudeErrorMode::Multiplicative;
    double eta = 0.0;
    double epsilon = 0.0;
  } error;
  struct Sweep {
    AxisSpec eta;
    AxisSpec epsilon;
    double tolerance = 1e-6;
    std::string label = "sweep";
  } sweep;
  PropagatorConfig propagator;
  struct Evolve {
    Branch branch = Branch::Plus;
    int record_stride = 1;
  } evolve;
  struct Waveform {
    int samples_per_segment = 160;
  } waveform;
  struct Output {
    std::string dir = "out";
    std::string timestamp;  // empty: SOURCE_DATE_EPOCH, else the wall clock
  } output;

  Json resolved;  // full document the fields were read from

  /// Physical parameters in rad/us.
  TwoLevelParams two_level() const {
    double k = physics.units == Units::Cycles ? kTwoPi : 1.0;
    return {physics.omega0 * k, physics.delta0 * k, physics.tau};
  }
  HyperfineParams hyperfine() const {
    double k = physics.units == Units::Cycles ? kTwoPi : 1.0;
    HyperfineParams h;
    h.a_hf = physics.a_hf * k;
    h.sign = physics.hyperfine_sign;
    return h;
  }
  GateOptions gate_options(bool for_sweep = false) const {
    GateOptions o;
    o.propagator = propagator;
    if (for_sweep) o.propagator.tolerance = sweep.tolerance;
    o.slowdown = gate.slowdown;
    o.holonomic_ratio = gate.holonomic_ratio;
    o.amplitude_mode = error.mode;
    o.phi1 = gate.phi1;
    return o;
  }
};

/// Defaults for a unit mode; the cycles mode reads omega0 = 2 MHz,
/// delta0 = 6 MHz and A = 127 MHz.
inline Json default_config(Units units = Units::Angular) {
  const bool cyc = units == Units::Cycles;
  PropagatorConfig pc;
  return Json{
      {"physics",
       {{"units", cyc ? "cycles" : "angular"},
        {"omega0", cyc ? 2.0 : 4.0 * kPi},
        {"delta0", 6.0},
        {"tau", 0.16},
        {"a_hf", cyc ? 127.0 : kTwoPi * 127.0},
        {"hyperfine_sign", 1}}},
      {"gate",
       {{"family", "SGQG"},
        {"program", "U1"},
        {"gamma", 0.5 * kPi},
        {"phi1", 0.0},
        {"two_qubit", false},
        {"slowdown", 10.0},
        {"holonomic_ratio", 1.134}}},
      {"error", {{"mode", "multiplicative"}, {"eta", 0.0}, {"epsilon", 0.0}}},
      {"sweep",
       {{"eta", {{"min", -0.2}, {"max", 0.2}, {"points", 41}}},
        {"epsilon", {{"min", -0.2}, {"max", 0.2}, {"points", 41}}},
        {"tolerance", 1e-6},
        {"label", "sweep"}}},
      {"propagator",
       {{"dt_max", pc.dt_max},
        {"steps_per_segment", pc.steps_per_segment},
        {"tolerance", pc.tolerance},
        {"min_dt", pc.min_dt}}},
      {"evolve", {{"branch", "plus"}, {"record_stride", 1}}},
      {"waveform", {{"samples_per_segment", 160}}},
      {"output", {{"dir", "out"}, {"timestamp", ""}}},
  };
}

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

// Every key of `user` must exist in `schema`, with objects matching objects.
inline void check_keys(const Json& user, const Json& schema, const std::string& path) {
  if (!user.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, value] : user.items()) {
    std::string p = join_path(path, key);
    if (!schema.contains(key)) throw ConfigError(p, "unknown key");
    if (schema.at(key).is_object()) check_keys(value, schema.at(key), p);
  }
}

inline const Json& field(const Json& doc, const std::string& path) {
  const Json* cur = &doc;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot - start);
    if (!cur->is_object() || !cur->contains(key)) throw ConfigError(path, "missing value");
    cur = &cur->at(key);
    if (dot == std::string::npos) return *cur;
    start = dot + 1;
  }
}

inline double get_number(const Json& doc, const std::string& path) {
  const Json& v = field(doc, path);
  if (!v.is_number()) throw ConfigError(path, "expected a number, got " + v.dump());
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

inline int get_int(const Json& doc, const std::string& path) {
  const Json& v = field(doc, path);
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer, got " + v.dump());
  return v.get<int>();
}

inline bool get_bool(const Json& doc, const std::string& path) {
  const Json& v = field(doc, path);
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false, got " + v.dump());
  return v.get<bool>();
}

inline std::string get_string(const Json& doc, const std::string& path) {
  const Json& v = field(doc, path);
  if (!v.is_string()) throw ConfigError(path, "expected a string, got " + v.dump());
  return v.get<std::string>();
}

template <class E, std::size_t N>
E get_enum(const Json& doc, const std::string& path, const std::pair<const char*, E> (&choices)[N]) {
  std::string s = get_string(doc, path);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (s == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  throw ConfigError(path, "'" + s + "' is not one of " + allowed);
}

inline void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

inline Units units_of(const Json& user) {
  if (!user.contains("physics") || !user["physics"].contains("units")) return Units::Angular;
  static constexpr std::pair<const char*, Units> kUnits[] = {{"angular", Units::Angular}, {"cycles", Units::Cycles}};
  return get_enum(user, "physics.units", kUnits);
}

inline AxisSpec get_axis(const Json& doc, const std::string& path) {
  AxisSpec a{get_number(doc, path + ".min"), get_number(doc, path + ".max"), get_int(doc, path + ".points")};
  require(a.points >= 1, path + ".points", "must be >= 1");
  require(a.min <= a.max, path, "min must not exceed max");
  require(a.points > 1 || a.min == a.max, path, "a single-point axis needs min == max");
  return a;
}

}  // namespace detail

/// Sets `path` (dotted) in `doc` to the JSON reading of `value`; a value
/// that is not valid JSON is taken as a string.
inline void apply_override(Json& doc, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + assignment + "' is not key=value");
  std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  Json* cur = &doc;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError(path, "empty path component in override");
    if (!cur->is_object()) throw ConfigError(path, "override descends into a non-object");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    if (cur->is_null()) *cur = Json::object();
    start = dot + 1;
  }
}

/// Builds a RunConfig from a user document (possibly empty) and overrides.
inline RunConfig resolve_config(Json user, const std::vector<std::string>& overrides = {}) {
  using namespace detail;
  if (user.is_null()) user = Json::object();
  for (const auto& o : overrides) apply_override(user, o);
  check_keys(user, default_config(), "");
  Units units = units_of(user);
  Json doc = default_config(units);
  doc.merge_patch(user);

  RunConfig c;
  auto& ph = c.physics;
  ph.units = units;
  ph.omega0 = get_number(doc, "physics.omega0");
  ph.delta0 = get_number(doc, "physics.delta0");
  ph.tau = get_number(doc, "physics.tau");
  ph.a_hf = get_number(doc, "physics.a_hf");
  ph.hyperfine_sign = get_int(doc, "physics.hyperfine_sign");
  require(ph.omega0 > 0.0, "physics.omega0", "must be > 0");
  require(ph.delta0 > 0.0, "physics.delta0", "must be > 0");
  require(ph.tau > 0.0, "physics.tau", "must be > 0");
  require(ph.a_hf >= 0.0, "physics.a_hf", "must be >= 0");
  require(ph.hyperfine_sign == 1 || ph.hyperfine_sign == -1, "physics.hyperfine_sign", "must be 1 or -1");

  static constexpr std::pair<const char*, GateFamily> kFamilies[] = {
      {"SGQG", GateFamily::SGQG}, {"ADIABATIC", GateFamily::Adiabatic}, {"HOLONOMIC", GateFamily::Holonomic}};
  static constexpr std::pair<const char*, Program> kPrograms[] = {{"U1", Program::U1}, {"U2", Program::U2}};
  auto& g = c.gate;
  g.family = get_enum(doc, "gate.family", kFamilies);
  g.program = get_enum(doc, "gate.program", kPrograms);
  g.gamma = get_number(doc, "gate.gamma");
  g.phi1 = get_number(doc, "gate.phi1");
  g.two_qubit = get_bool(doc, "gate.two_qubit");
  g.slowdown = get_number(doc, "gate.slowdown");
  g.holonomic_ratio = get_number(doc, "gate.holonomic_ratio");
  require(g.slowdown >= 1.0, "gate.slowdown", "must be >= 1");
  require(g.holonomic_ratio > 0.0, "gate.holonomic_ratio", "must be > 0");

  static constexpr std::pair<const char*, AmplitudeErrorMode> kModes[] = {
      {"multiplicative", AmplitudeErrorMode::Multiplicative}, {"additive", AmplitudeErrorMode::Additive}};
  c.error.mode = get_enum(doc, "error.mode", kModes);
  c.error.eta = get_number(doc, "error.eta");
  c.error.epsilon = get_number(doc, "error.epsilon");

  c.sweep.eta = get_axis(doc, "sweep.eta");
  c.sweep.epsilon = get_axis(doc, "sweep.epsilon");
  c.sweep.tolerance = get_number(doc, "sweep.tolerance");
  c.sweep.label = get_string(doc, "sweep.label");
  require(c.sweep.tolerance > 0.0, "sweep.tolerance", "must be > 0");
  require(!c.sweep.label.empty() && c.sweep.label.find_first_of("/\\") == std::string::npos, "sweep.label",
          "must be a non-empty file stem");

  auto& pc = c.propagator;
  pc.dt_max = get_number(doc, "propagator.dt_max");
  pc.steps_per_segment = get_int(doc, "propagator.steps_per_segment");
  pc.tolerance = get_number(doc, "propagator.tolerance");
  pc.min_dt = get_number(doc, "propagator.min_dt");
  require(pc.dt_max > 0.0, "propagator.dt_max", "must be > 0");
  require(pc.steps_per_segment >= 1, "propagator.steps_per_segment", "must be >= 1");
  require(pc.tolerance > 0.0, "propagator.tolerance", "must be > 0");
  require(pc.min_dt > 0.0, "propagator.min_dt", "must be > 0");

  static constexpr std::pair<const char*, Branch> kBranches[] = {{"plus", Branch::Plus}, {"minus", Branch::Minus}};
  c.evolve.branch = get_enum(doc, "evolve.branch", kBranches);
  c.evolve.record_stride = get_int(doc, "evolve.record_stride");
  require(c.evolve.record_stride >= 1, "evolve.record_stride", "must be >= 1");

  c.waveform.samples_per_segment = get_int(doc, "waveform.samples_per_segment");
  require(c.waveform.samples_per_segment >= 1, "waveform.samples_per_segment", "must be >= 1");

  c.output.dir = get_string(doc, "output.dir");
  c.output.timestamp = get_string(doc, "output.timestamp");

  c.resolved = std::move(doc);
  return c;
}

/// Reads a JSON config file. Missing or malformed files are ConfigErrors.
inline RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  Json user;
  try {
    user = Json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", path.string() + " is not valid JSON: " + e.what());
  }
  return resolve_config(std::move(user), overrides);
}

/// FNV-1a 64 over the canonical dump of the resolved config, without the
/// output section (where results go does not change what they are).
inline std::string config_hash(const RunConfig& c) {
  Json doc = c.resolved;
  doc.erase("output");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sgqg
