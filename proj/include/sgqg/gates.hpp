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

// Ideal target gates, their realization by propagation for the three gate
// families, and the intrinsic fidelity |Tr(U U0^dagger)| / d.

#pragma once

#include "sgqg/core.hpp"
#include "sgqg/error_model.hpp"
#include "sgqg/hamiltonians.hpp"
#include "sgqg/phases.hpp"
#include "sgqg/propagator.hpp"
#include "sgqg/schedules.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sgqg {

enum class GateFamily { SGQG, Adiabatic, Holonomic };

inline std::string_view to_string(GateFamily f) {
  switch (f) {
    case GateFamily::SGQG: return "SGQG";
    case GateFamily::Adiabatic: return "ADIABATIC";
    case GateFamily::Holonomic: return "HOLONOMIC";
  }
  return "?";
}

/// [[cos g + i cos x sin g, i sin x sin g], [i sin x sin g, cos g - i cos x sin g]]
inline UnitaryOperator ideal_single(double chi, double gamma) {
  UnitaryOperator u(2, 2);
  double cg = std::cos(gamma), sg = std::sin(gamma);
  cd off = kI * std::sin(chi) * sg;
  u << cd(cg, std::cos(chi) * sg), off, off, cd(cg, -std::cos(chi) * sg);
  return u;
}

/// |up><up| (x) block + |down><down| (x) I in basis (|0 dn>, |1 dn>, |0 up>, |1 up>).
inline UnitaryOperator controlled_block(const UnitaryOperator& up_block) {
  UnitaryOperator u = UnitaryOperator::Zero(4, 4);
  u.topLeftCorner(2, 2) = UnitaryOperator::Identity(2, 2);
  u.bottomRightCorner(2, 2) = up_block;
  return u;
}

inline UnitaryOperator ideal_twoqubit(double chi, double gamma) { return controlled_block(ideal_single(chi, gamma)); }

/// |Tr(u u0^dagger)| / dim. u may be non-unitary (leakage-projected).
inline double intrinsic_fidelity(const Operator& u, const UnitaryOperator& u0) {
  if (u.rows() != u0.rows() || u.cols() != u0.cols() || u.rows() != u.cols())
    throw InputError("fidelity of operators with mismatched dimensions");
  return std::abs((u * u0.adjoint()).trace()) / static_cast<double>(u.rows());
}

struct GateOptions {
  PropagatorConfig propagator;
  double slowdown = 10.0;          // adiabatic family: tau -> slowdown * tau
  double holonomic_ratio = 1.134;  // omega_nh = omega_sm / ratio
  std::optional<double> omega_sm;  // scanned from the U1 program when absent
  AmplitudeErrorMode amplitude_mode = AmplitudeErrorMode::Multiplicative;
  double phi1 = 0.0;               // first-leg phase; the second is phi1 + pi - gamma
  bool with_phase_report = false;  // single-qubit two-level families only
};

struct GateResult {
  Operator realized;  // projected onto the computational space
  UnitaryOperator ideal;
  double fidelity = 0.0;
  std::optional<PhaseReport> phase_report;
  GateFamily family = GateFamily::SGQG;
  Program program = Program::U1;
  double gamma = 0.0;
  double chi = 0.0;
  double timing = 0.0;  // total gate time, us
  double unitarity_defect = 0.0;
  double error_estimate = 0.0;
  long steps = 0;
  std::vector<std::string> notes;
};

/// Recast-drive peak used for error normalization and the holonomic pulse.
inline double resolve_omega_sm(const TwoLevelParams& p, const GateOptions& opts) {
  return opts.omega_sm ? *opts.omega_sm : derive_omega_sm(p, Program::U1).omega_sm;
}

inline HolonomicParams holonomic_params(const TwoLevelParams& p, const GateOptions& opts) {
  return HolonomicParams::from_peak(resolve_omega_sm(p, opts) / opts.holonomic_ratio);
}

/// Error model with the family's normalization (omega_sm, or omega_nh for
/// the holonomic family).
inline ErrorModel make_error_model(GateFamily family, double eta, double epsilon, const TwoLevelParams& p,
                                   const GateOptions& opts) {
  double ref = family == GateFamily::Holonomic ? holonomic_params(p, opts).omega_nh : resolve_omega_sm(p, opts);
  return {eta, epsilon, ref};
}

/// Drive schedule of a gate: phi2 = phi1 + pi - gamma for the two-level
/// families, the Gaussian Lambda pulse for the holonomic one.
inline PulseSchedule gate_schedule(GateFamily family, Program program, double gamma, const TwoLevelParams& p,
                                   const GateOptions& opts) {
  double phi1 = opts.phi1, phi2 = opts.phi1 + kPi - gamma;
  switch (family) {
    case GateFamily::SGQG:
      return program == Program::U1 ? build_u1_schedule(p, phi1, phi2) : build_u2_schedule(p, phi1, phi2);
    case GateFamily::Adiabatic:
      return build_adiabatic_schedule(p, program, opts.slowdown, phi1, phi2);
    case GateFamily::Holonomic:
      return build_holonomic_schedule(holonomic_params(p, opts));
  }
  throw CapabilityError("unknown gate family");
}

namespace detail {

inline double chi_of(Program program) { return program == Program::U1 ? 0.0 : 0.5 * kPi; }

inline void check_capability(GateFamily family, Program program, double gamma) {
  if (family != GateFamily::Holonomic) return;
  if (program != Program::U1 || std::abs(wrap_angle(gamma - 0.5 * kPi)) > 1e-12)
    throw CapabilityError("the holonomic family only realizes the pi/2 phase gate (U1, gamma = pi/2)");
}

// Ideal in the cyclic basis of the first leg: the closed form for phi1 = 0, rotated
// about z by phi1 otherwise.
inline UnitaryOperator rotated_ideal(double chi, double gamma, double phi1) {
  UnitaryOperator u = ideal_single(chi, gamma);
  if (phi1 == 0.0) return u;
  UnitaryOperator d = UnitaryOperator::Zero(2, 2);
  d(0, 0) = std::polar(1.0, -0.5 * phi1);
  d(1, 1) = std::polar(1.0, 0.5 * phi1);
  return d * u * d.adjoint();
}

// Native holonomic phase gate diag(1, -1) on the qubit subspace.
inline UnitaryOperator holonomic_native() {
  UnitaryOperator u = UnitaryOperator::Zero(2, 2);
  u(0, 0) = 1.0;
  u(1, 1) = -1.0;
  return u;
}

inline Operator project(const Operator& u, std::initializer_list<int> idx) {
  const int m = static_cast<int>(idx.size());
  Operator p(m, m);
  int i = 0;
  for (int a : idx) {
    int j = 0;
    for (int b : idx) p(i, j++) = u(a, b);
    ++i;
  }
  return p;
}

inline GateResult finish(const HamiltonianModel& model, const GateOptions& opts, GateResult r) {
  UnitaryEvolution ev = evolve_unitary_report(model, opts.propagator);
  double total = model.schedule().total_time();
  UnitaryOperator u = model.idle_frame_correction(total) * ev.unitary;
  r.unitarity_defect = unitarity_defect(u);
  r.error_estimate = ev.error_estimate;
  r.steps = ev.steps;
  r.timing = total;
  switch (model.dim()) {
    case 3: r.realized = project(u, {0, 1}); break;
    case 6: r.realized = project(u, {0, 1, 3, 4}); break;
    default: r.realized = u; break;
  }
  r.fidelity = intrinsic_fidelity(r.realized, r.ideal);
  return r;
}

}  // namespace detail

/// Single-qubit gate of the requested family. SGQG and adiabatic gates use
/// phi2 - phi1 = pi - gamma; the holonomic gate is the theta = phi = 0
/// Lambda drive (pi/2 phase gate), scored on the {|0>, |1>} subspace.
inline GateResult realize_single(GateFamily family, Program program, double gamma, const TwoLevelParams& p,
                                 const ErrorModel& err, const GateOptions& opts = {}) {
  p.validate();
  detail::check_capability(family, program, gamma);
  GateResult r;
  r.family = family;
  r.program = program;
  r.gamma = gamma;
  r.chi = detail::chi_of(program);
  HamiltonianModel model(gate_schedule(family, program, gamma, p, opts),
                         to_drive_error(err, opts.amplitude_mode));
  if (family == GateFamily::Holonomic) {
    r.ideal = ideal_single(0.0, 0.5 * kPi);
    r.notes.push_back("lambda system projected onto {|0>,|1>}");
  } else {
    r.ideal = detail::rotated_ideal(r.chi, gamma, opts.phi1);
  }
  r = detail::finish(model, opts, std::move(r));
  if (opts.with_phase_report && family != GateFamily::Holonomic) {
    ControlSample c0 = sample(model.schedule(), 0.0);
    StateVector psi0 = eigenframe(c0).lambda_plus;
    try {
      r.phase_report = phase_report(evolve_state(model, psi0, opts.propagator));
    } catch (const CyclicityError& e) {
      r.notes.push_back(std::string("phase report omitted: ") + e.what());
    }
  }
  return r;
}

/// Nuclear-spin-controlled gate: the drive acts on the spin-up block as in
/// the single-qubit gate and off-resonantly (shifted by the hyperfine
/// splitting) on the spin-down block. Scored over the full 4-dimensional
/// computational space.
inline GateResult realize_twoqubit(GateFamily family, Program program, double gamma, const TwoLevelParams& p,
                                   HyperfineParams hf, const ErrorModel& err, const GateOptions& opts = {}) {
  p.validate();
  detail::check_capability(family, program, gamma);
  hf.levels = family == GateFamily::Holonomic ? 6 : 4;
  GateResult r;
  r.family = family;
  r.program = program;
  r.gamma = gamma;
  r.chi = detail::chi_of(program);
  HamiltonianModel model(gate_schedule(family, program, gamma, p, opts),
                         to_drive_error(err, opts.amplitude_mode), hf);
  if (family == GateFamily::Holonomic) {
    r.ideal = controlled_block(detail::holonomic_native());
    r.notes.push_back("six-level model: one Lambda system per nuclear-spin block (constructed)");
  } else {
    r.ideal = controlled_block(detail::rotated_ideal(r.chi, gamma, opts.phi1));
  }
  return detail::finish(model, opts, std::move(r));
}

/// Applies the gates in order (first element acts first) and scores the
/// product against the product of the ideals.
struct GateStep {
  GateFamily family = GateFamily::SGQG;
  Program program = Program::U1;
  double gamma = 0.0;
};

inline GateResult realize_sequence(const std::vector<GateStep>& steps, const TwoLevelParams& p,
                                   const GateOptions& opts = {}) {
  if (steps.empty()) throw InputError("empty gate sequence");
  GateResult total;
  total.realized = Operator::Identity(2, 2);
  total.ideal = UnitaryOperator::Identity(2, 2);
  for (const auto& s : steps) {
    GateResult g = realize_single(s.family, s.program, s.gamma, p, ErrorModel{}, opts);
    total.realized = g.realized * total.realized;
    total.ideal = g.ideal * total.ideal;
    total.timing += g.timing;
    total.unitarity_defect = std::max(total.unitarity_defect, g.unitarity_defect);
    total.steps += g.steps;
  }
  total.family = steps.front().family;
  total.fidelity = intrinsic_fidelity(total.realized, total.ideal);
  return total;
}

}  // namespace sgqg
