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

// Robustness grids: intrinsic fidelity over (eta, epsilon) for every gate
// family. Cells are independent and are assembled by index, so the result
// does not depend on the worker count or completion order.

#pragma once

#include "sgqg/error_model.hpp"
#include "sgqg/gates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace sgqg {

/// n evenly spaced points on [lo, hi]; symmetric ranges hit 0 exactly.
inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ParameterError("axis needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = lo * (1.0 - t) + hi * t;
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

struct SweepRequest {
  GateFamily family = GateFamily::SGQG;
  Program program = Program::U1;
  double gamma = 0.5 * kPi;
  TwoLevelParams params;
  std::optional<HyperfineParams> hyperfine;  // set for two-qubit sweeps
  GateOptions options;
  std::string label;
};

struct FidelityGrid {
  std::vector<double> eta_axis;
  std::vector<double> epsilon_axis;
  std::vector<std::optional<double>> fidelities;  // row-major, eta outer
  std::vector<std::string> reasons;               // non-empty where a cell is missing
  SweepRequest request;
  double omega_sm = 0.0;
  double omega_ref = 0.0;
  double max_unitarity_defect = 0.0;

  std::size_t index(std::size_t i_eta, std::size_t i_eps) const { return i_eta * epsilon_axis.size() + i_eps; }
  const std::optional<double>& at(std::size_t i_eta, std::size_t i_eps) const {
    return fidelities[index(i_eta, i_eps)];
  }
  std::size_t missing() const {
    return static_cast<std::size_t>(std::count_if(fidelities.begin(), fidelities.end(),
                                                  [](const auto& f) { return !f.has_value(); }));
  }
  /// Mean over the present cells.
  double mean() const {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& f : fidelities)
      if (f) {
        s += *f;
        ++n;
      }
    return n ? s / static_cast<double>(n) : std::nan("");
  }
};

/// Called after each finished cell with (done, total).
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

namespace detail {

inline void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw ParameterError(std::string(name) + " axis is empty");
  if (!std::is_sorted(axis.begin(), axis.end())) throw ParameterError(std::string(name) + " axis is not sorted");
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
}

}  // namespace detail

/// Gate fidelity with the request's family normalization at one (eta, epsilon).
inline GateResult realize_cell(const SweepRequest& req, double eta, double epsilon) {
  ErrorModel err = make_error_model(req.family, eta, epsilon, req.params, req.options);
  if (req.hyperfine)
    return realize_twoqubit(req.family, req.program, req.gamma, req.params, *req.hyperfine, err, req.options);
  return realize_single(req.family, req.program, req.gamma, req.params, err, req.options);
}

inline FidelityGrid sweep2d(SweepRequest req, const std::vector<double>& eta_axis,
                            const std::vector<double>& epsilon_axis, int workers = 1, const ProgressFn& progress = {}) {
  detail::check_axis(eta_axis, "eta");
  detail::check_axis(epsilon_axis, "epsilon");
  req.params.validate();
  // Resolve the normalization once so every cell shares it.
  if (!req.options.omega_sm) req.options.omega_sm = derive_omega_sm(req.params, Program::U1).omega_sm;
  req.options.with_phase_report = false;

  FidelityGrid g;
  g.eta_axis = eta_axis;
  g.epsilon_axis = epsilon_axis;
  g.omega_sm = *req.options.omega_sm;
  g.omega_ref = make_error_model(req.family, 0.0, 0.0, req.params, req.options).omega_ref;
  g.request = req;
  const std::size_t n = eta_axis.size() * epsilon_axis.size();
  g.fidelities.assign(n, std::nullopt);
  g.reasons.assign(n, {});
  std::vector<double> defects(n, 0.0);

  std::mutex progress_mutex;
  std::size_t done = 0;
  detail::parallel_for(n, workers, [&](std::size_t idx) {
    std::size_t i = idx / epsilon_axis.size(), j = idx % epsilon_axis.size();
    try {
      GateResult r = realize_cell(g.request, eta_axis[i], epsilon_axis[j]);
      g.fidelities[idx] = r.fidelity;
      defects[idx] = r.unitarity_defect;
    } catch (const Error& e) {
      g.reasons[idx] = e.what();
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, n);
    }
  });
  g.max_unitarity_defect = *std::max_element(defects.begin(), defects.end());
  return g;
}

struct CompareSettings {
  TwoLevelParams params;
  HyperfineParams hyperfine;
  GateOptions options;  // slowdown, ratio, error mode, sweep propagator config
  double gamma = 0.5 * kPi;
  std::vector<double> eta_axis = linspace(-0.2, 0.2, 41);
  std::vector<double> epsilon_axis = linspace(-0.2, 0.2, 41);
};

/// The six comparison panels: {SGQG, adiabatic, holonomic} x {phase gate,
/// controlled-phase gate}, labelled fig2a..fig2f. `sink` sees each grid as
/// soon as it is complete.
inline std::vector<FidelityGrid> compare_families(const CompareSettings& s, int workers = 1,
                                                  const std::function<void(const FidelityGrid&)>& sink = {},
                                                  const ProgressFn& progress = {}) {
  struct Panel {
    const char* label;
    GateFamily family;
    bool two_qubit;
  };
  static constexpr Panel kPanels[] = {
      {"fig2a", GateFamily::SGQG, false},      {"fig2b", GateFamily::Adiabatic, false},
      {"fig2c", GateFamily::Holonomic, false}, {"fig2d", GateFamily::SGQG, true},
      {"fig2e", GateFamily::Adiabatic, true},  {"fig2f", GateFamily::Holonomic, true},
  };
  GateOptions opts = s.options;
  if (!opts.omega_sm) opts.omega_sm = derive_omega_sm(s.params, Program::U1).omega_sm;
  std::vector<FidelityGrid> out;
  for (const auto& p : kPanels) {
    SweepRequest req;
    req.family = p.family;
    req.program = Program::U1;
    req.gamma = s.gamma;
    req.params = s.params;
    if (p.two_qubit) req.hyperfine = s.hyperfine;
    req.options = opts;
    req.label = p.label;
    out.push_back(sweep2d(req, s.eta_axis, s.epsilon_axis, workers, progress));
    if (sink) sink(out.back());
  }
  return out;
}

}  // namespace sgqg
