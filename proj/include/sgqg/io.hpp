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

// CSV and JSON serialization of schedules, trajectories, gate results and
// fidelity grids. Numbers are written with the shortest representation that
// round-trips, independent of the C locale.

#pragma once

#include "sgqg/gates.hpp"
#include "sgqg/phases.hpp"
#include "sgqg/propagator.hpp"
#include "sgqg/schedules.hpp"
#include "sgqg/sweeps.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace sgqg {

struct IoError : Error {
  using Error::Error;
};

using Json = nlohmann::ordered_json;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---- metadata --------------------------------------------------------------

/// Writes one `# key: value` line per metadata entry. Strings go out raw,
/// numbers in shortest form, everything else as compact JSON.
inline void write_metadata_header(std::ostream& os, const Json& meta) {
  for (const auto& [key, value] : meta.items()) {
    os << "# " << key << ": ";
    if (value.is_string())
      os << value.get<std::string>();
    else if (value.is_number_float())
      os << format_double(value.get<double>());
    else
      os << value.dump();
    os << '\n';
  }
}

inline Json params_json(const TwoLevelParams& p) {
  return Json{{"omega0", p.omega0}, {"delta0", p.delta0}, {"tau", p.tau}};
}

inline Json hyperfine_json(const HyperfineParams& h) {
  return Json{{"a_hf", h.a_hf}, {"sign", h.sign}};
}

inline Json axis_json(const std::vector<double>& a) {
  return Json{{"min", a.front()}, {"max", a.back()}, {"points", a.size()}};
}

/// Grid provenance. `extra` (timestamp, config hash, ...) is appended last.
inline Json grid_metadata(const FidelityGrid& g, const Json& extra = Json::object()) {
  const SweepRequest& r = g.request;
  Json m;
  m["tool"] = "sgqg";
  m["tool_version"] = kVersion;
  m["label"] = r.label;
  m["family"] = std::string(to_string(r.family));
  m["program"] = r.program == Program::U1 ? "U1" : "U2";
  m["two_qubit"] = r.hyperfine.has_value();
  m["gamma"] = r.gamma;
  m["params"] = params_json(r.params);
  if (r.hyperfine) m["hyperfine"] = hyperfine_json(*r.hyperfine);
  m["omega_sm"] = g.omega_sm;
  m["omega_ref"] = g.omega_ref;
  m["amplitude_mode"] = std::string(to_string(r.options.amplitude_mode));
  if (r.family == GateFamily::Adiabatic) m["slowdown"] = r.options.slowdown;
  if (r.family == GateFamily::Holonomic) m["holonomic_ratio"] = r.options.holonomic_ratio;
  m["tolerance"] = r.options.propagator.tolerance;
  m["eta_axis"] = axis_json(g.eta_axis);
  m["epsilon_axis"] = axis_json(g.epsilon_axis);
  m["cells"] = g.fidelities.size();
  m["missing"] = g.missing();
  m["max_unitarity_defect"] = g.max_unitarity_defect;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  return m;
}

// ---- grids -----------------------------------------------------------------

/// Metadata header, then `eta,epsilon,fidelity` rows with eta as the outer
/// loop; missing cells read `nan`.
inline void write_grid_csv(std::ostream& os, const FidelityGrid& g, const Json& meta) {
  write_metadata_header(os, meta);
  os << "eta,epsilon,fidelity\n";
  for (std::size_t i = 0; i < g.eta_axis.size(); ++i)
    for (std::size_t j = 0; j < g.epsilon_axis.size(); ++j) {
      const auto& f = g.at(i, j);
      os << format_double(g.eta_axis[i]) << ',' << format_double(g.epsilon_axis[j]) << ','
         << (f ? format_double(*f) : std::string("nan")) << '\n';
    }
}

/// Sidecar: the same metadata plus the reasons for any missing cells.
inline Json grid_sidecar(const FidelityGrid& g, const Json& meta) {
  Json j = meta;
  Json missing = Json::array();
  for (std::size_t i = 0; i < g.eta_axis.size(); ++i)
    for (std::size_t k = 0; k < g.epsilon_axis.size(); ++k)
      if (!g.at(i, k))
        missing.push_back(Json{{"eta", g.eta_axis[i]}, {"epsilon", g.epsilon_axis[k]},
                               {"reason", g.reasons[g.index(i, k)]}});
  j["missing_cells"] = std::move(missing);
  return j;
}

// ---- waveforms -------------------------------------------------------------

/// `samples` right-limit points per segment starting at each segment's
/// start, plus the final instant.
inline void write_waveform_csv(std::ostream& os, const PulseSchedule& s, int samples, const Json& meta) {
  if (samples < 1) throw ParameterError("samples per segment must be >= 1");
  write_metadata_header(os, meta);
  os << "t_us,omega_r,delta,phi,omega_c,omega_s,phi_s\n";
  auto row = [&](const ControlSample& c) {
    os << format_double(c.t) << ',' << format_double(c.omega_r) << ',' << format_double(c.delta) << ','
       << format_double(c.phi) << ',' << format_double(c.omega_c) << ',' << format_double(c.omega_s) << ','
       << format_double(c.phi_s) << '\n';
  };
  for (const auto& seg : s.segments()) {
    const double d = seg.t_end - seg.t_start;
    for (int k = 0; k < samples; ++k)
      row(superadiabatic_fields_in(seg, seg.t_start + d * static_cast<double>(k) / samples));
  }
  const auto& last = s.segments().back();
  row(superadiabatic_fields_in(last, last.t_end));
}

// ---- trajectories ----------------------------------------------------------

/// `t_us,re0,im0,...,bloch_x,bloch_y,bloch_z,dyn_phase`; the Bloch columns
/// are `nan` for states with more than two components.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const Json& meta) {
  if (traj.states.empty()) throw InputError("empty trajectory");
  write_metadata_header(os, meta);
  const auto dim = traj.states.front().size();
  os << "t_us";
  for (Eigen::Index k = 0; k < dim; ++k) os << ",re" << k << ",im" << k;
  os << ",bloch_x,bloch_y,bloch_z,dyn_phase\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const StateVector& psi = traj.states[i];
    os << format_double(traj.times[i]);
    for (Eigen::Index k = 0; k < dim; ++k)
      os << ',' << format_double(psi(k).real()) << ',' << format_double(psi(k).imag());
    if (dim == 2) {
      auto b = bloch_vector(psi);
      os << ',' << format_double(b[0]) << ',' << format_double(b[1]) << ',' << format_double(b[2]);
    } else {
      os << ",nan,nan,nan";
    }
    os << ',' << format_double(traj.dyn_phase[i]) << '\n';
  }
}

// ---- JSON documents --------------------------------------------------------

inline Json to_json(const PhaseReport& r) {
  return Json{{"total_phase", r.total_phase},
              {"dynamical_phase", r.dynamical_phase},
              {"geometric_phase", r.geometric_phase},
              {"cyclicity_defect", r.cyclicity_defect},
              {"solid_angle", r.solid_angle}};
}

/// Rows of [re, im] pairs.
inline Json matrix_json(const Operator& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const GateResult& r) {
  Json j;
  j["family"] = std::string(to_string(r.family));
  j["program"] = r.program == Program::U1 ? "U1" : "U2";
  j["gamma"] = r.gamma;
  j["chi"] = r.chi;
  j["fidelity"] = r.fidelity;
  j["timing_us"] = r.timing;
  j["unitarity_defect"] = r.unitarity_defect;
  j["error_estimate"] = r.error_estimate;
  j["steps"] = r.steps;
  j["realized"] = matrix_json(r.realized);
  j["ideal"] = matrix_json(r.ideal);
  j["phase_report"] = r.phase_report ? to_json(*r.phase_report) : Json(nullptr);
  j["notes"] = r.notes;
  return j;
}

// ---- files -----------------------------------------------------------------

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace sgqg
