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

// Matrix Hamiltonians (hbar = 1) for the driven two-level qubit, its
// superadiabatic recast, the Lambda system, and the hyperfine-split
// two-qubit models.

#pragma once

#include "sgqg/core.hpp"
#include "sgqg/schedules.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace sgqg {

inline constexpr double kDefaultGapEpsilon = 1e-9;

/// (1/2)[[delta, a e^{-i phase}], [a e^{i phase}, -delta]]
inline HermitianOperator two_level_block(double amplitude, double phase, double delta) {
  HermitianOperator h(2, 2);
  cd off = 0.5 * amplitude * std::polar(1.0, -phase);
  h << 0.5 * delta, off, std::conj(off), -0.5 * delta;
  return h;
}

inline HermitianOperator h0(const ControlSample& c) { return two_level_block(c.omega_r, c.phi, c.delta); }

struct EigenFrame {
  double theta = 0.0;
  StateVector lambda_plus;
  StateVector lambda_minus;
  double e_plus = 0.0;
  double e_minus = 0.0;
  double omega_gap = 0.0;
};

/// Instantaneous eigenbasis of h0 in the gauge with e^{-+i phi/2} factors.
inline EigenFrame eigenframe(const ControlSample& c, double gap_epsilon = kDefaultGapEpsilon) {
  double gap = std::hypot(c.delta, c.omega_r);
  if (!(gap > gap_epsilon))
    throw DegenerateError("field gap " + std::to_string(gap) + " below degeneracy threshold");
  EigenFrame f;
  f.theta = std::atan2(c.omega_r, c.delta);
  f.omega_gap = gap;
  f.e_plus = 0.5 * gap;
  f.e_minus = -0.5 * gap;
  double ch = std::cos(0.5 * f.theta), sh = std::sin(0.5 * f.theta);
  cd lo = std::polar(1.0, -0.5 * c.phi), hi = std::polar(1.0, 0.5 * c.phi);
  f.lambda_plus.resize(2);
  f.lambda_minus.resize(2);
  f.lambda_plus << ch * lo, sh * hi;
  f.lambda_minus << -sh * lo, ch * hi;
  return f;
}

/// Fills omega_c = d(theta)/dt from the segment's analytic derivatives, and
/// the recast single-drive amplitude and phase shift.
inline ControlSample superadiabatic_fields_in(const Segment& seg, double t, double gap_epsilon = kDefaultGapEpsilon) {
  ControlSample c = sample_segment(seg, t);
  double gap2 = c.omega_r * c.omega_r + c.delta * c.delta;
  if (!(std::sqrt(gap2) > gap_epsilon)) throw DegenerateError("field gap below degeneracy threshold at t = " + std::to_string(t));
  double rabi_dot = derivative(seg.rabi, t);
  double delta_dot = derivative(seg.detuning, t);
  c.omega_c = (rabi_dot * c.delta - c.omega_r * delta_dot) / gap2;
  c.omega_s = std::hypot(c.omega_r, c.omega_c);
  c.phi_s = std::atan2(c.omega_c, c.omega_r);
  return c;
}

/// Right-limit superadiabatic fields at t.
inline ControlSample superadiabatic_fields(const PulseSchedule& s, double t, double gap_epsilon = kDefaultGapEpsilon) {
  return superadiabatic_fields_in(s.segments()[s.segment_index(t)], t, gap_epsilon);
}

/// Recast superadiabatic Hamiltonian; plain h0 for adiabatic programs.
inline HermitianOperator hs(const PulseSchedule& s, double t) {
  if (is_adiabatic(s.tag())) return h0(sample(s, t));
  ControlSample c = superadiabatic_fields(s, t);
  return two_level_block(c.omega_s, c.phi + c.phi_s, c.delta);
}

/// Lambda coupling in basis (|0>, |1>, |e>):
///   (envelope/2) [sin(theta/2) e^{i phi} |e><0| - cos(theta/2) |e><1| + h.c.] + delta_e |e><e|
inline HermitianOperator lambda_block(double envelope, double theta_l, double phi_l, double delta_e) {
  HermitianOperator h = HermitianOperator::Zero(3, 3);
  cd e0 = 0.5 * envelope * std::sin(0.5 * theta_l) * std::polar(1.0, phi_l);
  cd e1 = -0.5 * envelope * std::cos(0.5 * theta_l);
  h(2, 0) = e0;
  h(0, 2) = std::conj(e0);
  h(2, 1) = e1;
  h(1, 2) = std::conj(e1);
  h(2, 2) = delta_e;
  return h;
}

inline HermitianOperator h_lambda(const PulseSchedule& s, double t, double theta_l, double phi_l, double delta_e) {
  return lambda_block(sample(s, t).omega_r, theta_l, phi_l, delta_e);
}

struct HyperfineParams {
  double a_hf = kTwoPi * 127.0;
  int levels = 4;     // 4: two-level drive per nuclear block; 6: Lambda drive per block
  double sign = 1.0;  // sign of the detuning shift on the spin-down block

  void validate() const {
    if (!(a_hf >= 0.0)) throw ParameterError("a_hf must be >= 0");
    if (levels != 4 && levels != 6) throw ParameterError("hyperfine model needs 4 or 6 levels");
    if (sign != 1.0 && sign != -1.0) throw ParameterError("hyperfine sign must be +1 or -1");
  }
};

/// Systematic drive errors applied on top of the nominal controls:
/// amplitude -> scale * amplitude + offset, static detuning added to the
/// qubit detuning (two-level) or the excited level (Lambda).
struct DriveError {
  double scale = 1.0;
  double offset = 0.0;
  double detuning = 0.0;
};

/// Applied single-drive controls within one segment.
struct AppliedDrive {
  double amplitude = 0.0;
  double phase = 0.0;
  double detuning = 0.0;
};

inline AppliedDrive applied_drive(const Segment& seg, ProgramTag tag, double t, const DriveError& err) {
  AppliedDrive d;
  if (tag == ProgramTag::Holonomic || is_adiabatic(tag)) {
    ControlSample c = sample_segment(seg, t);
    d.amplitude = c.omega_r;
    d.phase = c.phi;
    d.detuning = c.delta;
  } else {
    ControlSample c = superadiabatic_fields_in(seg, t);
    d.amplitude = c.omega_s;
    d.phase = c.phi + c.phi_s;
    d.detuning = c.delta;
  }
  d.amplitude = err.scale * d.amplitude + err.offset;
  d.detuning += err.detuning;
  return d;
}

/// Time-dependent Hamiltonian of one gate realization: a schedule, an
/// optional hyperfine partner block and the injected drive errors.
///
/// Basis orders: two-level (|0>, |1>); Lambda (|0>, |1>, |e>); two-qubit
/// 4-level (|0 dn>, |1 dn>, |0 up>, |1 up>); two-qubit 6-level
/// (|0 dn>, |1 dn>, |e dn>, |0 up>, |1 up>, |e up>). The drive is resonant
/// with the spin-up block; the spin-down block sees the same field with
/// its detuning shifted by sign * a_hf.
class HamiltonianModel {
 public:
  explicit HamiltonianModel(PulseSchedule schedule, DriveError err = {},
                            std::optional<HyperfineParams> hf = std::nullopt, double theta_l = 0.0,
                            double phi_l = 0.0)
      : schedule_(std::move(schedule)), err_(err), hf_(hf), theta_l_(theta_l), phi_l_(phi_l) {
    if (hf_) {
      hf_->validate();
      int want = holonomic() ? 6 : 4;
      if (hf_->levels != want)
        throw ParameterError("hyperfine model for " + std::string(to_string(schedule_.tag())) + " needs " +
                             std::to_string(want) + " levels");
    }
  }

  const PulseSchedule& schedule() const { return schedule_; }
  const DriveError& drive_error() const { return err_; }
  const std::optional<HyperfineParams>& hyperfine() const { return hf_; }
  bool holonomic() const { return schedule_.tag() == ProgramTag::Holonomic; }

  int dim() const {
    int block = holonomic() ? 3 : 2;
    return hf_ ? 2 * block : block;
  }

  std::vector<double> breakpoints() const { return schedule_.breakpoints(); }

  /// H(t) evaluated with the waveforms of segment `k` (t may be either end).
  HermitianOperator operator()(double t, std::size_t k) const {
    AppliedDrive d = applied_drive(schedule_.segments()[k], schedule_.tag(), t, err_);
    HermitianOperator up = block(d, 0.0);
    if (!hf_) return up;
    HermitianOperator down = block(d, hf_->sign * hf_->a_hf);
    int b = static_cast<int>(up.rows());
    HermitianOperator h = HermitianOperator::Zero(2 * b, 2 * b);
    h.topLeftCorner(b, b) = down;
    h.bottomRightCorner(b, b) = up;
    return h;
  }

  /// Right-limit evaluation at t.
  HermitianOperator at(double t) const { return (*this)(t, schedule_.segment_index(t)); }

  /// Undoes the free precession of the undriven spin-down block over
  /// [0, duration] caused by its static detuning offset (hyperfine shift plus
  /// the injected static detuning), so the ideal spin-down action is I.
  /// Identity for single-qubit models.
  Operator idle_frame_correction(double duration) const {
    Operator c = Operator::Identity(dim(), dim());
    if (!hf_) return c;
    double shift = (hf_->sign * hf_->a_hf + err_.detuning) * duration;
    if (holonomic()) {
      c(2, 2) = std::polar(1.0, shift);
    } else {
      c(0, 0) = std::polar(1.0, 0.5 * shift);
      c(1, 1) = std::polar(1.0, -0.5 * shift);
    }
    return c;
  }

 private:
  HermitianOperator block(const AppliedDrive& d, double shift) const {
    if (holonomic()) return lambda_block(d.amplitude, theta_l_, phi_l_, d.detuning + shift);
    return two_level_block(d.amplitude, d.phase, d.detuning + shift);
  }

  PulseSchedule schedule_;
  DriveError err_;
  std::optional<HyperfineParams> hf_;
  double theta_l_;
  double phi_l_;
};

/// Block-diagonal two-qubit Hamiltonian at t (right limit).
inline HermitianOperator h_twoqubit(const PulseSchedule& s, double t, const HyperfineParams& hf) {
  return HamiltonianModel(s, {}, hf).at(t);
}

}  // namespace sgqg
