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

// Schroedinger propagation with the exponential midpoint rule:
//
//   psi_{k+1} = exp(-i H(t_k + dt/2) dt) psi_k
//
// The exponential is exact (spectral), so every step is unitary to rounding.
// The time grid never straddles a segment boundary of the source, and the
// step is halved until two successive refinements agree to the requested
// operator-norm tolerance.

#pragma once

#include "sgqg/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sgqg {

struct PropagatorConfig {
  double dt_max = 1e-3;         // us
  int steps_per_segment = 4000;  // base resolution: segment duration / steps
  double tolerance = 1e-9;       // operator-norm agreement between dt and dt/2
  double min_dt = 1e-7;          // below this the refinement gives up

  void validate() const {
    if (!(dt_max > 0.0)) throw ParameterError("dt_max must be > 0");
    if (steps_per_segment < 1) throw ParameterError("steps_per_segment must be >= 1");
    if (!(tolerance > 0.0)) throw ParameterError("tolerance must be > 0");
    if (!(min_dt > 0.0)) throw ParameterError("min_dt must be > 0");
  }
};

/// Anything that yields H(t) piecewise over a fixed set of breakpoints.
/// `h(t, k)` evaluates with the definition of piece k, so t may sit on
/// either end of the piece.
template <class S>
concept HamiltonianSource = requires(const S& s, double t, std::size_t k) {
  { s.dim() } -> std::convertible_to<int>;
  { s.breakpoints() } -> std::convertible_to<std::vector<double>>;
  { s(t, k) } -> std::convertible_to<HermitianOperator>;
};

/// Adapts a plain t -> H(t) callable over [0, T] (or explicit breakpoints).
class FunctionSource {
 public:
  FunctionSource(int dim, double total_time, std::function<HermitianOperator(double)> f)
      : dim_(dim), breaks_{0.0, total_time}, f_(std::move(f)) {}
  FunctionSource(int dim, std::vector<double> breakpoints, std::function<HermitianOperator(double)> f)
      : dim_(dim), breaks_(std::move(breakpoints)), f_(std::move(f)) {}

  int dim() const { return dim_; }
  std::vector<double> breakpoints() const { return breaks_; }
  HermitianOperator operator()(double t, std::size_t) const { return f_(t); }

 private:
  int dim_;
  std::vector<double> breaks_;
  std::function<HermitianOperator(double)> f_;
};

namespace detail {

// Analytic exp(-i h dt) for a 2x2 Hermitian h = a I + b.sigma.
inline void exp2(const HermitianOperator& h, double dt, Operator& out, int off) {
  double a = 0.5 * (h(0, 0).real() + h(1, 1).real());
  double bz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  cd b01 = h(0, 1);  // bx - i by
  double r = std::sqrt(bz * bz + std::norm(b01));
  double c = std::cos(r * dt);
  double s = r > 0.0 ? std::sin(r * dt) / r : dt;
  cd g = std::polar(1.0, -a * dt);
  out(off, off) = g * cd(c, -s * bz);
  out(off + 1, off + 1) = g * cd(c, s * bz);
  out(off, off + 1) = g * (-kI * s * b01);
  out(off + 1, off) = g * (-kI * s * std::conj(b01));
}

}  // namespace detail

/// exp(-i h dt) for Hermitian h of dimension <= 6. Decoupled diagonal
/// blocks are exponentiated independently: 1x1 and 2x2 blocks in closed
/// form, larger ones by spectral decomposition.
inline UnitaryOperator hermitian_exp(const HermitianOperator& h, double dt) {
  const int n = static_cast<int>(h.rows());
  UnitaryOperator u = UnitaryOperator::Zero(n, n);
  if (n == 2) {
    detail::exp2(h, dt, u, 0);
    return u;
  }
  // Connected components of the coupling graph.
  std::array<int, kMaxDim> comp{};
  comp.fill(-1);
  int ncomp = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[i] >= 0) continue;
    std::array<int, kMaxDim> stack{};
    int top = 0;
    stack[top++] = i;
    comp[i] = ncomp;
    while (top > 0) {
      int v = stack[--top];
      for (int w = 0; w < n; ++w) {
        if (comp[w] < 0 && (h(v, w) != 0.0 || h(w, v) != 0.0)) {
          comp[w] = ncomp;
          stack[top++] = w;
        }
      }
    }
    ++ncomp;
  }
  for (int c = 0; c < ncomp; ++c) {
    std::array<int, kMaxDim> idx{};
    int m = 0;
    for (int i = 0; i < n; ++i)
      if (comp[i] == c) idx[m++] = i;
    bool contiguous = idx[m - 1] - idx[0] == m - 1;
    if (m == 1) {
      u(idx[0], idx[0]) = std::polar(1.0, -h(idx[0], idx[0]).real() * dt);
    } else if (m == 2 && contiguous) {
      detail::exp2(h.block(idx[0], idx[0], 2, 2), dt, u, idx[0]);
    } else {
      HermitianOperator sub(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = h(idx[i], idx[j]);
      Eigen::SelfAdjointEigenSolver<HermitianOperator> es(sub);
      const auto& vec = es.eigenvectors();
      StateVector ph(m);
      for (int i = 0; i < m; ++i) ph(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
      Operator e = vec * ph.asDiagonal() * vec.adjoint();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) u(idx[i], idx[j]) = e(i, j);
    }
  }
  return u;
}

/// One contiguous piece of the time grid, lying inside source piece `piece`.
struct GridPiece {
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t piece = 0;
  long steps = 1;
};

/// Base time grid over [t_begin, t_end] at refinement level r (2^r times the
/// base resolution). Pieces follow the source breakpoints.
inline std::vector<GridPiece> make_grid(const std::vector<double>& breaks, double t_begin, double t_end,
                                        const PropagatorConfig& cfg, int refinement) {
  if (breaks.size() < 2) throw InputError("source needs at least one piece");
  if (!(t_begin >= breaks.front() && t_end <= breaks.back() && t_end > t_begin))
    throw RangeError("propagation window outside the source's time range");
  std::vector<GridPiece> grid;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    double a = std::max(breaks[k], t_begin), b = std::min(breaks[k + 1], t_end);
    if (!(b > a)) continue;
    double seg_len = breaks[k + 1] - breaks[k];
    double len = b - a;
    long base = std::max<long>({1L, static_cast<long>(std::ceil(cfg.steps_per_segment * len / seg_len - 1e-9)),
                                static_cast<long>(std::ceil(len / cfg.dt_max - 1e-9))});
    grid.push_back({a, b, k, base << refinement});
  }
  return grid;
}

inline double smallest_step(const std::vector<GridPiece>& grid) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& g : grid) m = std::min(m, (g.t_end - g.t_begin) / static_cast<double>(g.steps));
  return m;
}

/// Operator-norm distance between the results at dt and dt/2.
inline double convergence_check(const Operator& coarse, const Operator& fine) {
  if (coarse.rows() != fine.rows() || coarse.cols() != fine.cols())
    throw InputError("convergence check on mismatched shapes");
  return operator_norm(coarse - fine);
}

struct UnitaryEvolution {
  UnitaryOperator unitary;
  double error_estimate = 0.0;
  long steps = 0;  // steps of the returned (finest) run
};

template <HamiltonianSource S>
UnitaryOperator evolve_unitary_fixed(const S& src, const std::vector<GridPiece>& grid) {
  const int n = src.dim();
  UnitaryOperator u = UnitaryOperator::Identity(n, n);
  for (const auto& g : grid) {
    double dt = (g.t_end - g.t_begin) / static_cast<double>(g.steps);
    for (long i = 0; i < g.steps; ++i) {
      double tm = g.t_begin + (static_cast<double>(i) + 0.5) * dt;
      u = hermitian_exp(src(tm, g.piece), dt) * u;
    }
  }
  return u;
}

namespace detail {

// Next refinement level after a failed check: the midpoint rule is second
// order, so the difference shrinks ~4x per halving.
inline int next_refinement(int r, double diff, double tol) {
  double ratio = diff / (0.5 * tol);
  int jump = std::max(1, static_cast<int>(std::ceil(0.5 * std::log2(ratio))));
  return r + std::min(jump, 4);
}

}  // namespace detail

/// Propagates the identity over [t_begin, t_end] with step refinement.
template <HamiltonianSource S>
UnitaryEvolution evolve_unitary_report(const S& src, const PropagatorConfig& cfg, std::optional<double> t_begin = {},
                                       std::optional<double> t_end = {}) {
  cfg.validate();
  auto breaks = src.breakpoints();
  double a = t_begin.value_or(breaks.front()), b = t_end.value_or(breaks.back());
  int r = 0;
  UnitaryOperator coarse = evolve_unitary_fixed(src, make_grid(breaks, a, b, cfg, r));
  for (;;) {
    auto fine_grid = make_grid(breaks, a, b, cfg, r + 1);
    if (smallest_step(fine_grid) < cfg.min_dt)
      throw AccuracyError("step underflow: dt below " + std::to_string(cfg.min_dt) + " us before reaching tolerance");
    UnitaryOperator fine = evolve_unitary_fixed(src, fine_grid);
    double diff = convergence_check(coarse, fine);
    if (diff < cfg.tolerance) {
      long steps = 0;
      for (const auto& g : fine_grid) steps += g.steps;
      return {fine, diff, steps};
    }
    int next = detail::next_refinement(r, diff, cfg.tolerance);
    if (next == r + 1) {
      coarse = fine;
    } else {
      auto grid = make_grid(breaks, a, b, cfg, next);
      if (smallest_step(grid) < cfg.min_dt)
        throw AccuracyError("step underflow: dt below " + std::to_string(cfg.min_dt) + " us before reaching tolerance");
      coarse = evolve_unitary_fixed(src, grid);
    }
    r = next;
  }
}

template <HamiltonianSource S>
UnitaryOperator evolve_unitary(const S& src, const PropagatorConfig& cfg = {}) {
  return evolve_unitary_report(src, cfg).unitary;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<double> dyn_phase;  // running -integral <psi|H|psi> dt at each stored time
  double dyn_phase_integral = 0.0;
  double error_estimate = 0.0;

  /// Bloch vector per stored time; two-level trajectories only.
  std::vector<std::array<double, 3>> bloch() const;
};

inline std::array<double, 3> bloch_vector(const StateVector& psi) {
  if (psi.size() != 2) throw InputError("Bloch vector needs a two-component state");
  cd a = psi(0), b = psi(1);
  cd ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

inline std::vector<std::array<double, 3>> Trajectory::bloch() const {
  std::vector<std::array<double, 3>> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(bloch_vector(s));
  return out;
}

template <HamiltonianSource S>
Trajectory evolve_state_fixed(const S& src, const StateVector& psi0, const std::vector<GridPiece>& grid,
                              long record_stride = 1) {
  Trajectory tr;
  StateVector psi = psi0;
  double phase = 0.0;
  auto energy = [&](double t, std::size_t k, const StateVector& v) {
    return (v.adjoint() * src(t, k) * v)(0, 0).real();
  };
  tr.times.push_back(grid.front().t_begin);
  tr.states.push_back(psi);
  tr.dyn_phase.push_back(0.0);
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto& g = grid[p];
    double dt = (g.t_end - g.t_begin) / static_cast<double>(g.steps);
    double e_left = energy(g.t_begin, g.piece, psi);
    for (long i = 0; i < g.steps; ++i) {
      double t0 = g.t_begin + static_cast<double>(i) * dt;
      double t1 = i + 1 == g.steps ? g.t_end : g.t_begin + static_cast<double>(i + 1) * dt;
      psi = hermitian_exp(src(t0 + 0.5 * dt, g.piece), dt) * psi;
      double e_right = energy(t1, g.piece, psi);
      phase -= 0.5 * (e_left + e_right) * (t1 - t0);
      e_left = e_right;
      bool last = p + 1 == grid.size() && i + 1 == g.steps;
      if ((i + 1) % record_stride == 0 || i + 1 == g.steps || last) {
        tr.times.push_back(t1);
        tr.states.push_back(psi);
        tr.dyn_phase.push_back(phase);
      }
    }
  }
  tr.dyn_phase_integral = phase;
  return tr;
}

/// Propagates psi0 and records the trajectory of the accepted (finest) run.
template <HamiltonianSource S>
Trajectory evolve_state(const S& src, const StateVector& psi0, const PropagatorConfig& cfg = {},
                        long record_stride = 1) {
  cfg.validate();
  if (psi0.size() != src.dim()) throw InputError("initial state has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw InputError("initial state is not normalized");
  if (record_stride < 1) throw InputError("record stride must be >= 1");
  auto breaks = src.breakpoints();
  double a = breaks.front(), b = breaks.back();
  int r = 0;
  Trajectory coarse = evolve_state_fixed(src, psi0, make_grid(breaks, a, b, cfg, r), 1L << 30);
  for (;;) {
    auto fine_grid = make_grid(breaks, a, b, cfg, r + 1);
    if (smallest_step(fine_grid) < cfg.min_dt)
      throw AccuracyError("step underflow: dt below " + std::to_string(cfg.min_dt) + " us before reaching tolerance");
    Trajectory fine = evolve_state_fixed(src, psi0, fine_grid, record_stride);
    double diff = (coarse.states.back() - fine.states.back()).norm();
    if (diff < cfg.tolerance) {
      fine.error_estimate = diff;
      return fine;
    }
    int next = detail::next_refinement(r, diff, cfg.tolerance);
    if (next == r + 1) {
      coarse = std::move(fine);
    } else {
      auto grid = make_grid(breaks, a, b, cfg, next);
      if (smallest_step(grid) < cfg.min_dt)
        throw AccuracyError("step underflow: dt below " + std::to_string(cfg.min_dt) + " us before reaching tolerance");
      coarse = evolve_state_fixed(src, psi0, grid, 1L << 30);
    }
    r = next;
  }
}

}  // namespace sgqg
