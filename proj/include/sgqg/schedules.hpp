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

// Analytic pulse programs for the orange-slice gates and the Gaussian
// Lambda-system pulse. Units: rad/us for frequencies, us for time.

#pragma once

#include "sgqg/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sgqg {

struct TwoLevelParams {
  double omega0 = 4.0 * kPi;  // peak-scale Rabi parameter
  double delta0 = 6.0;        // detuning scale
  double tau = 0.16;          // quarter period

  void validate() const {
    if (!(omega0 > 0.0)) throw ParameterError("omega0 must be > 0");
    if (!(delta0 > 0.0)) throw ParameterError("delta0 must be > 0");
    if (!(tau > 0.0)) throw ParameterError("tau must be > 0");
  }
};

struct HolonomicParams {
  double omega_nh = 0.0;    // peak Rabi frequency of the Gaussian
  double sigma = 0.0;       // Gaussian width
  double total_time = 0.0;  // truncation window, centred on the peak

  /// Width from the area rule 2*sigma = 4*sqrt(pi)/omega_nh, window 4*sigma.
  static HolonomicParams from_peak(double omega_nh) {
    if (!(omega_nh > 0.0)) throw ParameterError("omega_nh must be > 0");
    HolonomicParams h;
    h.omega_nh = omega_nh;
    h.sigma = 2.0 * std::sqrt(kPi) / omega_nh;
    h.total_time = 4.0 * h.sigma;
    return h;
  }

  void validate() const {
    if (!(omega_nh > 0.0)) throw ParameterError("omega_nh must be > 0");
    if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
    if (!(total_time > 0.0)) throw ParameterError("total_time must be > 0");
  }
};

// f(t) = offset + amplitude * cos(rate * (t - origin))
struct CosineWave {
  double offset = 0.0;
  double amplitude = 0.0;
  double origin = 0.0;
  double rate = 0.0;

  double value(double t) const { return offset + amplitude * std::cos(rate * (t - origin)); }
  double derivative(double t) const { return -amplitude * rate * std::sin(rate * (t - origin)); }
  double integral(double a, double b) const {
    if (rate == 0.0) return (offset + amplitude) * (b - a);
    return offset * (b - a) +
           amplitude / rate * (std::sin(rate * (b - origin)) - std::sin(rate * (a - origin)));
  }
};

// f(t) = peak * exp(-(t - center)^2 / sigma^2)
struct GaussianWave {
  double peak = 0.0;
  double center = 0.0;
  double sigma = 1.0;

  double value(double t) const {
    double x = (t - center) / sigma;
    return peak * std::exp(-x * x);
  }
  double derivative(double t) const {
    double x = (t - center) / sigma;
    return -2.0 * x / sigma * peak * std::exp(-x * x);
  }
  double integral(double a, double b) const {
    return 0.5 * peak * sigma * std::sqrt(kPi) *
           (std::erf((b - center) / sigma) - std::erf((a - center) / sigma));
  }
};

using Waveform = std::variant<CosineWave, GaussianWave>;

inline double value(const Waveform& w, double t) {
  return std::visit([t](const auto& f) { return f.value(t); }, w);
}
inline double derivative(const Waveform& w, double t) {
  return std::visit([t](const auto& f) { return f.derivative(t); }, w);
}
inline double integral(const Waveform& w, double a, double b) {
  return std::visit([a, b](const auto& f) { return f.integral(a, b); }, w);
}

inline Waveform constant_wave(double v) { return CosineWave{v, 0.0, 0.0, 0.0}; }

struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  Waveform rabi = constant_wave(0.0);
  Waveform detuning = constant_wave(0.0);
  double phase = 0.0;  // constant over the segment

  double duration() const { return t_end - t_start; }
};

enum class ProgramTag { U1, U2, AdiabaticU1, AdiabaticU2, Holonomic, Synthetic };

inline std::string_view to_string(ProgramTag tag) {
  switch (tag) {
    case ProgramTag::U1: return "U1";
    case ProgramTag::U2: return "U2";
    case ProgramTag::AdiabaticU1: return "ADIABATIC_U1";
    case ProgramTag::AdiabaticU2: return "ADIABATIC_U2";
    case ProgramTag::Holonomic: return "HOLONOMIC";
    case ProgramTag::Synthetic: return "SYNTHETIC";
  }
  return "?";
}

inline bool is_adiabatic(ProgramTag tag) {
  return tag == ProgramTag::AdiabaticU1 || tag == ProgramTag::AdiabaticU2;
}

/// Two-level orange-slice programs (and their slowed-down copies).
enum class Program { U1, U2 };

inline std::string_view to_string(Program p) { return p == Program::U1 ? "U1" : "U2"; }

/// Instantaneous control tuple. The superadiabatic fields (omega_c,
/// omega_s, phi_s) are zero until filled by superadiabatic_fields().
struct ControlSample {
  double t = 0.0;
  double omega_r = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  double omega_c = 0.0;
  double omega_s = 0.0;
  double phi_s = 0.0;
};

class PulseSchedule {
 public:
  PulseSchedule(std::vector<Segment> segments, ProgramTag tag) : segments_(std::move(segments)), tag_(tag) {
    if (segments_.empty()) throw ParameterError("schedule needs at least one segment");
    for (std::size_t k = 0; k < segments_.size(); ++k) {
      if (!(segments_[k].t_end > segments_[k].t_start))
        throw ParameterError("segment " + std::to_string(k) + " has non-positive duration");
      if (k > 0 && segments_[k].t_start != segments_[k - 1].t_end)
        throw ParameterError("segments must be contiguous in time");
    }
    if (segments_.front().t_start != 0.0) throw ParameterError("schedule must start at t = 0");
  }

  const std::vector<Segment>& segments() const { return segments_; }
  ProgramTag tag() const { return tag_; }
  double total_time() const { return segments_.back().t_end; }

  /// Segment boundaries t_0 = 0 < t_1 < ... < t_N = total_time.
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    b.reserve(segments_.size() + 1);
    for (const auto& s : segments_) b.push_back(s.t_start);
    b.push_back(total_time());
    return b;
  }

  /// Index of the segment owning t; boundaries belong to the later segment.
  std::size_t segment_index(double t) const {
    if (!(t >= 0.0 && t <= total_time()))
      throw RangeError("t = " + std::to_string(t) + " outside [0, " + std::to_string(total_time()) + "]");
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const Segment& s) { return v < s.t_start; });
    std::size_t k = static_cast<std::size_t>(it - segments_.begin()) - 1;
    return std::min(k, segments_.size() - 1);
  }

 private:
  std::vector<Segment> segments_;
  ProgramTag tag_;
};

/// Waveform values of one segment at t (t may sit on either of its ends).
inline ControlSample sample_segment(const Segment& seg, double t) {
  ControlSample c;
  c.t = t;
  c.omega_r = value(seg.rabi, t);
  c.delta = value(seg.detuning, t);
  c.phi = seg.phase;
  return c;
}

/// Right-limit sample at t; only omega_r, delta and phi are filled.
inline ControlSample sample(const PulseSchedule& s, double t) {
  return sample_segment(s.segments()[s.segment_index(t)], t);
}

/// Left-limit sample: at a boundary, the earlier segment's end value.
inline ControlSample sample_left(const PulseSchedule& s, double t) {
  std::size_t k = s.segment_index(t);
  if (k > 0 && t == s.segments()[k].t_start) --k;
  return sample_segment(s.segments()[k], t);
}

/// Integral of the Rabi envelope over the whole schedule.
inline double pulse_area(const PulseSchedule& s) {
  double area = 0.0;
  for (const auto& seg : s.segments()) area += integral(seg.rabi, seg.t_start, seg.t_end);
  return area;
}

namespace detail {

// Quarter-period branches of the orange-slice waveforms. A "rise" leg moves
// the field from a pole to the equator (Rabi 0 -> 2*omega0, detuning
// 2*delta0 -> 0); a "fall" leg continues from the equator to the south
// pole (Rabi 2*omega0 -> 0, detuning 0 -> -2*delta0).
inline Segment rise(const TwoLevelParams& p, double t0, double tau, double phase) {
  double rate = kPi / tau;
  return Segment{t0, t0 + tau, CosineWave{p.omega0, -p.omega0, t0, rate},
                 CosineWave{p.delta0, p.delta0, t0, rate}, phase};
}

inline Segment fall(const TwoLevelParams& p, double t0, double tau, double phase) {
  double rate = kPi / tau;
  return Segment{t0, t0 + tau, CosineWave{p.omega0, p.omega0, t0, rate},
                 CosineWave{-p.delta0, p.delta0, t0, rate}, phase};
}

inline std::vector<Segment> u1_segments(const TwoLevelParams& p, double tau, double phi1, double phi2) {
  return {rise(p, 0.0, tau, phi1), fall(p, tau, tau, phi1), rise(p, 2.0 * tau, tau, phi2),
          fall(p, 3.0 * tau, tau, phi2)};
}

inline std::vector<Segment> u2_segments(const TwoLevelParams& p, double tau, double phi1p, double phi2p) {
  return {fall(p, 0.0, tau, phi1p), rise(p, tau, tau, phi2p), fall(p, 2.0 * tau, tau, phi2p),
          rise(p, 3.0 * tau, tau, phi1p)};
}

}  // namespace detail

/// Phase gate program: north pole -> south pole at phi1, back at phi2.
/// Four quarter-period segments, total 4*tau.
inline PulseSchedule build_u1_schedule(const TwoLevelParams& p, double phi1, double phi2) {
  p.validate();
  return PulseSchedule(detail::u1_segments(p, p.tau, phi1, phi2), ProgramTag::U1);
}

/// Equator-based program: B -> C at phi1', C -> A at phi2', A -> B at phi1'.
inline PulseSchedule build_u2_schedule(const TwoLevelParams& p, double phi1p, double phi2p) {
  p.validate();
  return PulseSchedule(detail::u2_segments(p, p.tau, phi1p, phi2p), ProgramTag::U2);
}

/// Same waveform shapes with tau stretched by `slowdown`; tagged so the
/// propagator drives with H0 only.
inline PulseSchedule build_adiabatic_schedule(const TwoLevelParams& p, Program program, double slowdown,
                                              double phi1, double phi2) {
  p.validate();
  if (!(slowdown >= 1.0)) throw ParameterError("slowdown must be >= 1");
  double tau = slowdown * p.tau;
  if (program == Program::U1)
    return PulseSchedule(detail::u1_segments(p, tau, phi1, phi2), ProgramTag::AdiabaticU1);
  return PulseSchedule(detail::u2_segments(p, tau, phi1, phi2), ProgramTag::AdiabaticU2);
}

/// Truncated Gaussian, centred in its window, resonant (zero detuning).
inline PulseSchedule build_holonomic_schedule(const HolonomicParams& h) {
  h.validate();
  double t = h.total_time;
  Segment seg{0.0, t, GaussianWave{h.omega_nh, 0.5 * t, h.sigma}, constant_wave(0.0), 0.0};
  return PulseSchedule({seg}, ProgramTag::Holonomic);
}

/// Constant controls over [0, duration]; used for checks and diagnostics.
inline PulseSchedule build_constant_schedule(double omega_r, double delta, double phi, double duration) {
  if (!(duration > 0.0)) throw ParameterError("duration must be > 0");
  if (omega_r < 0.0) throw ParameterError("omega_r must be >= 0");
  return PulseSchedule({Segment{0.0, duration, constant_wave(omega_r), constant_wave(delta), phi}},
                       ProgramTag::Synthetic);
}

}  // namespace sgqg
