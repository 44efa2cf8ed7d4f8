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

// Phase bookkeeping for cyclic evolutions: total / dynamical / geometric
// split, Bloch-sphere solid angles, and the Berry-connection cross-check.

#pragma once

#include "sgqg/core.hpp"
#include "sgqg/hamiltonians.hpp"
#include "sgqg/propagator.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace sgqg {

using Vec3 = std::array<double, 3>;

struct PhaseReport {
  double total_phase = 0.0;
  double dynamical_phase = 0.0;
  double geometric_phase = 0.0;
  double cyclicity_defect = 0.0;
  double solid_angle = 0.0;
};

inline constexpr double kCyclicityTolerance = 1e-4;

namespace detail {

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Signed solid angle of the spherical triangle (a, b, c) on the unit sphere
// (Van Oosterom-Strackee); positive for counter-clockwise seen from outside.
inline double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  double num = dot(a, cross(b, c));
  double den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  return 2.0 * std::atan2(num, den);
}

// Deterministic apex for fanning: the Fibonacci-sphere direction that stays
// farthest from every path point and its antipode.
inline Vec3 fan_apex(std::span<const Vec3> path) {
  constexpr int kCandidates = 512;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  Vec3 best{0.0, 0.0, 1.0};
  double best_score = 2.0;
  std::size_t stride = std::max<std::size_t>(1, path.size() / 4096);
  for (int i = 0; i < kCandidates; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / kCandidates;
    double r = std::sqrt(1.0 - z * z);
    Vec3 c{r * std::cos(golden * i), r * std::sin(golden * i), z};
    double worst = 0.0;
    for (std::size_t k = 0; k < path.size(); k += stride) worst = std::max(worst, std::abs(dot(c, path[k])));
    if (worst < best_score) {
      best_score = worst;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

/// Signed solid angle enclosed by the closed polygon through `path` (the
/// last point joins back to the first), as a sum of spherical-triangle
/// excesses fanned from an apex off the path. Right-hand rule with the
/// outward normal; reported in (-2 pi, 2 pi].
inline double solid_angle(std::span<const Vec3> path) {
  if (path.size() < 3) return 0.0;
  Vec3 apex = detail::fan_apex(path);
  double sum = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Vec3& a = path[k];
    const Vec3& b = path[(k + 1) % path.size()];
    sum += detail::triangle_solid_angle(apex, a, b);
  }
  double r = std::remainder(sum, 2.0 * kTwoPi);  // [-2 pi, 2 pi]
  if (r <= -kTwoPi) r += 2.0 * kTwoPi;
  return r;
}

/// Total/dynamical/geometric split of a cyclic trajectory. The geometric
/// part is total minus dynamical; the solid angle is that of the state's
/// Bloch path (two-level trajectories only, 0 otherwise).
inline PhaseReport phase_report(const Trajectory& traj) {
  if (traj.states.size() < 2) throw InputError("trajectory too short for a phase report");
  const StateVector& first = traj.states.front();
  const StateVector& last = traj.states.back();
  cd overlap = first.dot(last);  // <psi(0)|psi(T)>
  PhaseReport r;
  r.cyclicity_defect = std::max(0.0, 1.0 - std::abs(overlap));
  if (!(r.cyclicity_defect < kCyclicityTolerance)) {
    CyclicityError e("trajectory is not cyclic: defect " + std::to_string(r.cyclicity_defect));
    e.defect = r.cyclicity_defect;
    throw e;
  }
  r.total_phase = std::arg(overlap);
  r.dynamical_phase = wrap_angle(traj.dyn_phase_integral);
  r.geometric_phase = wrap_angle(r.total_phase - traj.dyn_phase_integral);
  if (first.size() == 2) {
    auto path = traj.bloch();
    r.solid_angle = solid_angle(path);
  }
  return r;
}

/// B such that h = (1/2) B.sigma for a traceless 2x2 Hermitian h.
inline Vec3 effective_field(const HermitianOperator& h) {
  if (h.rows() != 2 || h.cols() != 2) throw InputError("effective field needs a 2x2 operator");
  if (std::abs(h.trace()) > 1e-9) throw InputError("effective field needs a traceless operator");
  cd off = h(0, 1);
  return {2.0 * off.real(), -2.0 * off.imag(), (h(0, 0) - h(1, 1)).real()};
}

enum class Branch { Plus, Minus };

inline const StateVector& branch_vector(const EigenFrame& f, Branch b) {
  return b == Branch::Plus ? f.lambda_plus : f.lambda_minus;
}

inline constexpr double kMinFrameOverlap = 0.99;

/// Integral of A = i<lambda|d/dt lambda> along one densely sampled continuous
/// segment, in the frames' own gauge. Each increment is
/// -arg<lambda_k|lambda_{k+1}>, which is gauge-smooth as long as consecutive
/// frames stay close.
inline double berry_connection(std::span<const EigenFrame> frames, Branch branch) {
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    cd ov = branch_vector(frames[k], branch).dot(branch_vector(frames[k + 1], branch));
    if (std::abs(ov) < kMinFrameOverlap)
      throw SamplingError("frames " + std::to_string(k) + " and " + std::to_string(k + 1) +
                          " too far apart (overlap " + std::to_string(std::abs(ov)) + ")");
    sum -= std::arg(ov);
  }
  return sum;
}

/// One continuous piece of a loop: frames along a segment and the eigenstate
/// branch the evolving state occupies there.
struct FramePath {
  std::vector<EigenFrame> frames;
  Branch branch = Branch::Plus;
};

/// Berry phase of a closed loop assembled from continuous pieces. Within a
/// piece the connection is integrated; where the control jumps (phi, or a
/// pole flip that swaps branches) the gauge mismatch between the end of one
/// piece and the start of the next is booked as -arg<end|start>, including
/// the closing jump back to the first frame. Result in (-pi, pi].
inline double loop_berry_phase(std::span<const FramePath> pieces) {
  if (pieces.empty()) throw InputError("empty loop");
  double sum = 0.0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const auto& cur = pieces[p];
    const auto& nxt = pieces[(p + 1) % pieces.size()];
    if (cur.frames.empty() || nxt.frames.empty()) throw InputError("loop piece without frames");
    sum += berry_connection(cur.frames, cur.branch);
    cd jump = branch_vector(cur.frames.back(), cur.branch).dot(branch_vector(nxt.frames.front(), nxt.branch));
    if (std::abs(jump) < kMinFrameOverlap) throw SamplingError("loop pieces do not join up");
    sum -= std::arg(jump);
  }
  return wrap_angle(sum);
}

}  // namespace sgqg
