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

// sgqg: waveform export, state propagation, gate realization and robustness
// sweeps driven by a JSON run configuration.
//
// Exit codes: 0 success, 2 configuration error, 3 computation failure,
// 4 I/O failure.

#include "sgqg/config.hpp"
#include "sgqg/gates.hpp"
#include "sgqg/io.hpp"
#include "sgqg/sweeps.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using sgqg::Json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kCompute = 3, kIo = 4 };

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string resolve_timestamp(const sgqg::RunConfig& cfg) {
  if (!cfg.output.timestamp.empty()) return cfg.output.timestamp;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    long long v = std::strtoll(sde, &end, 10);
    if (end != sde && *end == '\0') return iso_utc(static_cast<std::time_t>(v));
  }
  return iso_utc(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

struct Context {
  sgqg::RunConfig cfg;
  fs::path out;
  int workers = 1;
  Json stamp;  // appended to every artifact's metadata

  sgqg::TwoLevelParams params() const { return cfg.two_level(); }
};

Json schedule_metadata(const Context& ctx, double omega_sm) {
  const auto& g = ctx.cfg.gate;
  Json m;
  m["tool"] = "sgqg";
  m["tool_version"] = sgqg::kVersion;
  m["family"] = std::string(sgqg::to_string(g.family));
  m["program"] = g.program == sgqg::Program::U1 ? "U1" : "U2";
  m["gamma"] = g.gamma;
  m["phi1"] = g.phi1;
  m["params"] = sgqg::params_json(ctx.params());
  m["omega_sm"] = omega_sm;
  for (const auto& [k, v] : ctx.stamp.items()) m[k] = v;
  return m;
}

sgqg::PulseSchedule schedule_of(const Context& ctx, const sgqg::GateOptions& opts) {
  const auto& g = ctx.cfg.gate;
  if (g.family == sgqg::GateFamily::Holonomic && g.program != sgqg::Program::U1)
    throw sgqg::ConfigError("gate.program", "the holonomic family has no U2 program");
  return sgqg::gate_schedule(g.family, g.program, g.gamma, ctx.params(), opts);
}

std::string render_csv(const std::function<void(std::ostream&)>& body) {
  std::ostringstream os;
  body(os);
  return os.str();
}

int cmd_waveform(Context& ctx) {
  sgqg::GateOptions opts = ctx.cfg.gate_options();
  opts.omega_sm = sgqg::resolve_omega_sm(ctx.params(), opts);
  sgqg::PulseSchedule s = schedule_of(ctx, opts);
  Json meta = schedule_metadata(ctx, *opts.omega_sm);
  meta["total_time_us"] = s.total_time();
  meta["samples_per_segment"] = ctx.cfg.waveform.samples_per_segment;
  fs::path file = ctx.out / "waveform.csv";
  sgqg::write_text_file(file, render_csv([&](std::ostream& os) {
                          sgqg::write_waveform_csv(os, s, ctx.cfg.waveform.samples_per_segment, meta);
                        }));
  std::cout << file.string() << '\n';
  return kOk;
}

int cmd_evolve(Context& ctx) {
  if (ctx.cfg.gate.two_qubit) throw sgqg::ConfigError("gate.two_qubit", "evolve runs single-qubit models only");
  sgqg::GateOptions opts = ctx.cfg.gate_options();
  opts.omega_sm = sgqg::resolve_omega_sm(ctx.params(), opts);
  sgqg::PulseSchedule s = schedule_of(ctx, opts);
  sgqg::ErrorModel em =
      sgqg::make_error_model(ctx.cfg.gate.family, ctx.cfg.error.eta, ctx.cfg.error.epsilon, ctx.params(), opts);
  sgqg::HamiltonianModel model(s, sgqg::to_drive_error(em, opts.amplitude_mode));

  sgqg::StateVector psi0;
  std::string initial;
  if (model.holonomic()) {
    psi0 = sgqg::StateVector::Zero(3);
    psi0(1) = 1.0;
    initial = "|1>";
  } else {
    sgqg::EigenFrame f = sgqg::eigenframe(sgqg::sample(s, 0.0));
    psi0 = sgqg::branch_vector(f, ctx.cfg.evolve.branch);
    initial = ctx.cfg.evolve.branch == sgqg::Branch::Plus ? "lambda_plus(0)" : "lambda_minus(0)";
  }
  sgqg::Trajectory traj = sgqg::evolve_state(model, psi0, ctx.cfg.propagator, ctx.cfg.evolve.record_stride);

  Json meta = schedule_metadata(ctx, *opts.omega_sm);
  meta["initial_state"] = initial;
  meta["eta"] = ctx.cfg.error.eta;
  meta["epsilon"] = ctx.cfg.error.epsilon;
  meta["error_estimate"] = traj.error_estimate;
  fs::path csv = ctx.out / "trajectory.csv";
  sgqg::write_text_file(csv, render_csv([&](std::ostream& os) { sgqg::write_trajectory_csv(os, traj, meta); }));
  std::cout << csv.string() << '\n';

  Json report = sgqg::to_json(sgqg::phase_report(traj));
  report["metadata"] = meta;
  fs::path json = ctx.out / "phase_report.json";
  sgqg::write_json_file(json, report);
  std::cout << json.string() << '\n';
  return kOk;
}

int cmd_gate(Context& ctx) {
  const auto& g = ctx.cfg.gate;
  sgqg::GateOptions opts = ctx.cfg.gate_options();
  opts.omega_sm = sgqg::resolve_omega_sm(ctx.params(), opts);
  opts.with_phase_report = !g.two_qubit && g.family != sgqg::GateFamily::Holonomic;
  if (g.family == sgqg::GateFamily::Holonomic) schedule_of(ctx, opts);
  sgqg::ErrorModel em = sgqg::make_error_model(g.family, ctx.cfg.error.eta, ctx.cfg.error.epsilon, ctx.params(), opts);
  sgqg::GateResult r =
      g.two_qubit ? sgqg::realize_twoqubit(g.family, g.program, g.gamma, ctx.params(), ctx.cfg.hyperfine(), em, opts)
                  : sgqg::realize_single(g.family, g.program, g.gamma, ctx.params(), em, opts);
  Json doc = sgqg::to_json(r);
  Json meta = schedule_metadata(ctx, *opts.omega_sm);
  meta["two_qubit"] = g.two_qubit;
  if (g.two_qubit) meta["hyperfine"] = sgqg::hyperfine_json(ctx.cfg.hyperfine());
  meta["eta"] = ctx.cfg.error.eta;
  meta["epsilon"] = ctx.cfg.error.epsilon;
  meta["omega_ref"] = em.omega_ref;
  meta["amplitude_mode"] = std::string(sgqg::to_string(opts.amplitude_mode));
  doc["metadata"] = meta;
  sgqg::write_json_file(ctx.out / "gate.json", doc);
  std::cout << doc.dump(2) << '\n';
  return kOk;
}

void write_grid(const Context& ctx, const sgqg::FidelityGrid& grid) {
  Json meta = sgqg::grid_metadata(grid, ctx.stamp);
  fs::path csv = ctx.out / (grid.request.label + ".csv");
  sgqg::write_text_file(csv, render_csv([&](std::ostream& os) { sgqg::write_grid_csv(os, grid, meta); }));
  sgqg::write_json_file(ctx.out / (grid.request.label + ".json"), sgqg::grid_sidecar(grid, meta));
  std::cout << csv.string() << '\n';
}

void report_missing(const sgqg::FidelityGrid& g) {
  if (auto n = g.missing()) std::cerr << "sgqg: " << g.request.label << ": " << n << " cell(s) failed\n";
}

int cmd_sweep(Context& ctx) {
  const auto& g = ctx.cfg.gate;
  sgqg::SweepRequest req;
  req.family = g.family;
  req.program = g.program;
  req.gamma = g.gamma;
  req.params = ctx.params();
  if (g.two_qubit) req.hyperfine = ctx.cfg.hyperfine();
  req.options = ctx.cfg.gate_options(true);
  req.label = ctx.cfg.sweep.label;
  if (g.family == sgqg::GateFamily::Holonomic) schedule_of(ctx, req.options);
  sgqg::FidelityGrid grid = sgqg::sweep2d(req, ctx.cfg.sweep.eta.values(), ctx.cfg.sweep.epsilon.values(), ctx.workers);
  write_grid(ctx, grid);
  report_missing(grid);
  return grid.missing() == grid.fidelities.size() ? kCompute : kOk;
}

int cmd_compare(Context& ctx) {
  sgqg::CompareSettings s;
  s.params = ctx.params();
  s.hyperfine = ctx.cfg.hyperfine();
  s.options = ctx.cfg.gate_options(true);
  s.gamma = ctx.cfg.gate.gamma;
  s.eta_axis = ctx.cfg.sweep.eta.values();
  s.epsilon_axis = ctx.cfg.sweep.epsilon.values();
  std::size_t cells = 0, missing = 0;
  sgqg::compare_families(s, ctx.workers, [&](const sgqg::FidelityGrid& grid) {
    write_grid(ctx, grid);
    report_missing(grid);
    cells += grid.fidelities.size();
    missing += grid.missing();
  });
  return missing == cells ? kCompute : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superadiabatic geometric gate simulator"};
  app.set_version_flag("--version", std::string(sgqg::kVersion));
  std::string config_path, out_dir;
  int workers = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--workers", workers, "sweep worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  app.add_option("--override", overrides, "dotted.key=value, applied after the config file")->take_all();
  app.fallthrough();
  app.require_subcommand(1);

  using Handler = int (*)(Context&);
  std::vector<std::pair<CLI::App*, Handler>> commands = {
      {app.add_subcommand("waveform", "sample the drive schedule to CSV"), cmd_waveform},
      {app.add_subcommand("evolve", "propagate the initial eigenstate; trajectory CSV and phase report"), cmd_evolve},
      {app.add_subcommand("gate", "realize one gate and print the result as JSON"), cmd_gate},
      {app.add_subcommand("sweep", "fidelity grid over (eta, epsilon)"), cmd_sweep},
      {app.add_subcommand("compare", "the six family comparison grids fig2a..fig2f"), cmd_compare},
  };
  for (auto& [sub, handler] : commands) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  Context ctx;
  try {
    ctx.cfg = config_path.empty() ? sgqg::resolve_config(Json::object(), overrides)
                                  : sgqg::load_config(config_path, overrides);
    if (!out_dir.empty()) {
      ctx.cfg.output.dir = out_dir;
      ctx.cfg.resolved["output"]["dir"] = out_dir;
    }
  } catch (const sgqg::ConfigError& e) {
    std::cerr << "sgqg: config error: " << e.what() << '\n';
    return kConfig;
  }
  ctx.out = ctx.cfg.output.dir;
  ctx.workers = workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  ctx.stamp = Json{{"units", ctx.cfg.physics.units == sgqg::Units::Cycles ? "cycles" : "angular"},
                   {"timestamp", resolve_timestamp(ctx.cfg)},
                   {"config_hash", sgqg::config_hash(ctx.cfg)}};

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    try {
      return handler(ctx);
    } catch (const sgqg::ConfigError& e) {
      std::cerr << "sgqg: config error: " << e.what() << '\n';
      return kConfig;
    } catch (const sgqg::CapabilityError& e) {
      std::cerr << "sgqg: config error: gate.family: " << e.what() << '\n';
      return kConfig;
    } catch (const sgqg::IoError& e) {
      std::cerr << "sgqg: io error: " << e.what() << '\n';
      return kIo;
    } catch (const std::exception& e) {
      std::cerr << "sgqg: computation failed: " << e.what() << '\n';
      return kCompute;
    }
  }
  return kConfig;
}
