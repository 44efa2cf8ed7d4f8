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

#pragma once

#include "sgqg/core.hpp"
#include "sgqg/hamiltonians.hpp"
#include "sgqg/schedules.hpp"

#include <algorithm>
#include <string_view>

namespace sgqg {

/// Relative systematic errors. eta scales the applied drive amplitude;
/// epsilon is a static detuning in units of omega_ref.
struct ErrorModel {
  double eta = 0.0;
  double epsilon = 0.0;
  double omega_ref = 0.0;
};

enum class AmplitudeErrorMode { Multiplicative, Additive };

inline std::string_view to_string(AmplitudeErrorMode m) {
  return m == AmplitudeErrorMode::Multiplicative ? "multiplicative" : "additive";
}

/// Multiplicative: amplitude * (1 + eta). Additive: amplitude + eta * omega_ref.
/// With eta = epsilon = 0 the result is the identity transformation.
inline DriveError to_drive_error(const ErrorModel& e, AmplitudeErrorMode mode = AmplitudeErrorMode::Multiplicative) {
  DriveError d;
  if (mode == AmplitudeErrorMode::Multiplicative)
    d.scale = 1.0 + e.eta;
  else
    d.offset = e.eta * e.omega_ref;
  d.detuning = e.epsilon * e.omega_ref;
  return d;
}

/// Peak of the recast drive amplitude over a schedule, from a dense scan.
struct OmegaSmScan {
  double omega_sm = 0.0;    // max Omega_s(t)
  double t_at_max = 0.0;
  double peak_rabi = 0.0;   // max Omega_R(t) of the bare drive
  bool constraint_holds = false;  // omega_sm <= peak_rabi (to rounding)
  long points = 0;
};

inline OmegaSmScan derive_omega_sm(const PulseSchedule& s, long points = 200000) {
  if (points < 2) throw ParameterError("scan needs at least two points");
  OmegaSmScan r;
  r.points = points;
  const double total = s.total_time();
  for (long i = 0; i < points; ++i) {
    double t = total * static_cast<double>(i) / static_cast<double>(points - 1);
    ControlSample c = superadiabatic_fields(s, t);
    if (c.omega_s > r.omega_sm) {
      r.omega_sm = c.omega_s;
      r.t_at_max = t;
    }
    r.peak_rabi = std::max(r.peak_rabi, c.omega_r);
  }
  // The scan also covers each segment's left-limit endpoint.
  for (std::size_t k = 0; k < s.segments().size(); ++k) {
    const auto& seg = s.segments()[k];
    ControlSample c = superadiabatic_fields_in(seg, seg.t_end);
    if (c.omega_s > r.omega_sm) {
      r.omega_sm = c.omega_s;
      r.t_at_max = seg.t_end;
    }
    r.peak_rabi = std::max(r.peak_rabi, c.omega_r);
  }
  r.constraint_holds = r.omega_sm <= r.peak_rabi * (1.0 + 1e-12);
  return r;
}

/// Omega_sm of the two-level program at the given parameters.
inline OmegaSmScan derive_omega_sm(const TwoLevelParams& p, Program program, long points = 200000) {
  PulseSchedule s = program == Program::U1 ? build_u1_schedule(p, 0.0, 0.0) : build_u2_schedule(p, 0.0, 0.0);
  return derive_omega_sm(s, points);
}

}  // namespace sgqg
