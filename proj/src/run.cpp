#include "dnls/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include <json.hpp>

#include "dnls/diagnostics.hpp"
#include "dnls/filament.hpp"
#include "dnls/scattering.hpp"
#include "dnls/solver.hpp"

#ifndef DNLS_VERSION
#define DNLS_VERSION "unknown"
#endif

namespace dnls {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void add_check(RunManifest& m, std::string name, bool passed, double value, double bound) {
  m.checks.push_back({std::move(name), passed, value, bound});
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

fs::path prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_diagnostics(const fs::path& dir, const RunConfig& cfg, const std::vector<DiagnosticsRecord>& recs) {
  if (cfg.format == OutputFormat::csv) {
    std::string text = std::string(kCsvHeader) + "\n";
    for (const auto& r : recs) text += csv_row(r) + "\n";
    write_text(dir / "diagnostics.csv", text);
    return;
  }
  json rows = json::array();
  for (const auto& r : recs) {
    rows.push_back({{"step", r.step},
                    {"t", number(r.t)},
                    {"mass", number(r.mass)},
                    {"grad_l2", number(r.grad_l2)},
                    {"potential_l2", number(r.potential_l2)},
                    {"energy", number(r.energy)},
                    {"cum_dissipation", number(r.cum_dissipation)},
                    {"energy_residual", number(r.energy_residual)},
                    {"mass_residual", number(r.mass_residual)},
                    {"boundary_contamination", number(r.boundary_contamination)},
                    {"blowup", r.blowup}});
  }
  write_text(dir / "diagnostics.json", rows.dump(1) + "\n");
}

void write_snapshot(const fs::path& dir, std::size_t step, const FieldState& s) {
  std::string text = "x,re,im\n";
  for (std::size_t j = 0; j < s.size(); ++j)
    text += fmt(s.grid.node(j)) + "," + fmt(s.values[j].real()) + "," + fmt(s.values[j].imag()) + "\n";
  write_text(dir / ("step_" + std::to_string(step) + ".csv"), text);
}

void terminal_from_record(RunManifest& m, const DiagnosticsRecord& r) {
  m.terminal = {{"step", static_cast<double>(r.step)},
                {"t", r.t},
                {"mass", r.mass},
                {"grad_l2", r.grad_l2},
                {"potential_l2", r.potential_l2},
                {"energy", r.energy},
                {"cum_dissipation", r.cum_dissipation},
                {"energy_residual", r.energy_residual},
                {"mass_residual", r.mass_residual},
                {"boundary_contamination", r.boundary_contamination}};
}

double max_abs(const Trajectory& traj, double DiagnosticsRecord::*field) {
  double worst = 0.0;
  for (const auto& e : traj.entries) worst = std::max(worst, std::abs(e.record.*field));
  return worst;
}

void run_filament(const RunConfig& cfg, RunManifest& m, const fs::path* out) {
  const ArclengthGrid grid = ArclengthGrid::symmetric(cfg.curve_half_width, cfg.curve_h);
  double drift = 0.0;
  fs::path curves;
  if (out) curves = prepare_dir(*out / "curves");
  for (double t : cfg.curve_times) {
    const Curve3 curve = reconstruct_curve(self_similar_profile(cfg.c0, t, grid), cfg.metric, Frame3{}, {}, t);
    const double target = tangent_type(cfg.metric);
    for (double v : sm_invariant(tangent_indicatrix(curve), cfg.metric)) drift = std::max(drift, std::abs(v - target));
    if (out) {
      try {
        write_curve((curves / ("curve_t" + fmt(t) + ".txt")).string(), curve);
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
    }
  }
  add_check(m, "sm_invariant_drift", drift <= 1e-8, drift, 1e-8);

  CornerEstimate est;
  try {
    est = corner_tangents(cfg.c0, cfg.metric, cfg.curve_times, grid);
  } catch (const std::domain_error&) {
    add_check(m, "corner_extrapolation", false, std::numeric_limits<double>::infinity(), 1e-3);
    return;
  }
  add_check(m, "corner_extrapolation", est.spread <= 1e-3, est.spread, 1e-3);
  const Vec3 sum{est.A1[0] + est.A2[0], est.A1[1] + est.A2[1], est.A1[2] + est.A2[2]};
  const double sum_norm = std::sqrt(sum[0] * sum[0] + sum[1] * sum[1] + sum[2] * sum[2]);
  if (cfg.c0 > 0.0) add_check(m, "corner_nondegenerate", sum_norm > 1e-6, sum_norm, 1e-6);
  m.terminal = {{"A1_x", est.A1[0]}, {"A1_y", est.A1[1]}, {"A1_z", est.A1[2]},
                {"A2_x", est.A2[0]}, {"A2_y", est.A2[1]}, {"A2_z", est.A2[2]},
                {"angle", est.angle}, {"spread", est.spread}, {"sm_invariant_drift", drift}};
}

}  // namespace

bool RunManifest::all_passed() const {
  return !blowup && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

int RunManifest::exit_code() const {
  if (blowup) return kExitBlowup;
  return all_passed() ? kExitOk : kExitCheckFailed;
}

std::string RunManifest::to_json() const {
  json cfg = json::object();
  for (const auto& [k, v] : config_to_key_values(config)) cfg[k] = v;
  json term = json::object();
  for (const auto& [k, v] : terminal) term[k] = number(v);
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"value", number(c.value)}, {"bound", number(c.bound)}});
  json doc = {{"version", version},      {"config", cfg},     {"terminal", term},
              {"checks", checks_json},   {"blowup", blowup},  {"passed", all_passed()},
              {"exit_code", exit_code()}};
  return doc.dump(2) + "\n";
}

FieldState initial_state(const RunConfig& cfg, const SpatialGrid& grid) {
  FieldState s(grid, cfg.t_start);
  switch (cfg.profile) {
    case Profile::zero:
      break;
    case Profile::mode: {
      const double xi = std::numbers::pi * cfg.mode / grid.half_width();
      for (std::size_t j = 0; j < grid.size(); ++j) s.values[j] = std::polar(cfg.amp, xi * grid.node(j));
      break;
    }
    case Profile::gaussian: {
      if (cfg.seed == 0) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const double x = grid.node(j) / cfg.width;
          s.values[j] = cfg.amp * std::exp(-x * x);
        }
        break;
      }
      // Three Gaussians with seeded centres, widths, amplitudes and phases.
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int g = 0; g < 3; ++g) {
        const double centre = (4.0 * unit(rng) - 2.0) * cfg.width;
        const double w = cfg.width * (0.5 + unit(rng));
        const double a = cfg.amp * (0.5 + 0.5 * unit(rng));
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const double x = (grid.node(j) - centre) / w;
          s.values[j] += std::polar(a * std::exp(-x * x), phase);
        }
      }
      break;
    }
  }
  return s;
}

std::vector<std::size_t> geometric_snapshot_steps(const TimeMesh& mesh, std::size_t count) {
  std::set<std::size_t> steps;
  if (count == 0 || mesh.steps == 0) return {};
  count = std::min<std::size_t>(count, 64);
  if (count == 1) return {mesh.steps};
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    std::size_t k;
    if (mesh.rule == MeshRule::logarithmic) {
      // Times are already geometric in the index.
      k = static_cast<std::size_t>(std::llround(frac * static_cast<double>(mesh.steps)));
    } else {
      k = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(mesh.steps), frac)));
    }
    steps.insert(std::min(k, mesh.steps));
  }
  return {steps.begin(), steps.end()};
}

std::string csv_row(const DiagnosticsRecord& r) {
  return std::to_string(r.step) + "," + fmt(r.t) + "," + fmt(r.mass) + "," + fmt(r.grad_l2) + "," +
         fmt(r.potential_l2) + "," + fmt(r.energy) + "," + fmt(r.cum_dissipation) + "," +
         fmt(r.energy_residual) + "," + fmt(r.mass_residual) + "," + fmt(r.boundary_contamination);
}

RunManifest run_scenario(const RunConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  RunManifest m;
  m.config = cfg;
  m.version = DNLS_VERSION;

  std::optional<fs::path> out;
  if (!cfg.out.empty()) out = prepare_dir(cfg.out);

  if (cfg.scenario == Scenario::filament_corner) {
    run_filament(cfg, m, out ? &*out : nullptr);
  } else {
    const EquationSpec spec = cfg.equation();
    const TimeMesh mesh = cfg.time_mesh();
    const SpatialGrid grid(cfg.n, cfg.half_width);
    const FieldState init = initial_state(cfg, grid);

    IntegrateOptions opts;
    opts.cadence = cfg.cadence;
    const std::vector<std::size_t> written = geometric_snapshot_steps(mesh, cfg.snapshots);
    opts.snapshot_steps = written;
    if (cfg.scenario == Scenario::subcritical_conformal)
      for (std::size_t k : dyadic_steps(mesh)) opts.snapshot_steps.push_back(k);
    if (cfg.fault_flip_nonlinear_sign) {
      EquationSpec flipped = spec;
      flipped.params.sign = spec.params.sign == Sign::focusing ? Sign::defocusing : Sign::focusing;
      opts.propagator = flipped;
    }

    const Trajectory traj = integrate(spec, init, mesh, opts);
    m.blowup = traj.blowup;
    terminal_from_record(m, traj.last());
    add_check(m, "no_blowup", !traj.blowup, traj.blowup ? 1.0 : 0.0, 0.0);

    switch (cfg.scenario) {
      case Scenario::critical_defocusing: {
        const AprioriReport rep = check_apriori_bounds(traj, cfg.energy_tolerance);
        add_check(m, "gradient_bound_margin", rep.grad_margin >= 0.0, rep.grad_margin, 0.0);
        add_check(m, "potential_bound_margin", rep.potential_margin >= 0.0, rep.potential_margin, 0.0);
        add_check(m, "mass_envelope_margin", rep.mass_margin >= 0.0, rep.mass_margin, 0.0);
        add_check(m, "dissipation_bound_margin", rep.dissipation_margin >= 0.0, rep.dissipation_margin, 0.0);
        const double budget = max_abs(traj, &DiagnosticsRecord::energy_residual);
        add_check(m, "energy_budget", budget <= cfg.energy_tolerance, budget, cfg.energy_tolerance);
        break;
      }
      case Scenario::subcritical_conformal: {
        if (spec.params.sign == Sign::defocusing) {
          const AprioriReport rep = check_apriori_bounds(traj, cfg.energy_tolerance);
          add_check(m, "gradient_bound_margin", rep.grad_margin >= 0.0, rep.grad_margin, 0.0);
          add_check(m, "potential_bound_margin", rep.potential_margin >= 0.0, rep.potential_margin, 0.0);
        }
        const double budget = max_abs(traj, &DiagnosticsRecord::energy_residual);
        add_check(m, "energy_budget", budget <= cfg.energy_tolerance, budget, cfg.energy_tolerance);
        if (!traj.blowup && dyadic_steps(mesh).size() >= 3) {
          const std::vector<double> d = cauchy_tail(traj);
          // Monotone once 2^k t_0 >= 10 t_0.
          bool decreasing = true;
          double ratio = std::numeric_limits<double>::quiet_NaN();
          for (std::size_t k = 4; k + 1 < d.size(); ++k) {
            decreasing = decreasing && d[k + 1] < d[k];
            ratio = d[k + 1] / d[k];
          }
          add_check(m, "cauchy_tail_decreasing", decreasing, ratio, 1.0);
          m.terminal.emplace_back("tail_last", d.back());
        }
        break;
      }
      case Scenario::subcritical_direct: {
        const double worst = max_abs(traj, &DiagnosticsRecord::mass_residual);
        add_check(m, "mass_law", worst <= cfg.energy_tolerance, worst, cfg.energy_tolerance);
        break;
      }
      case Scenario::gp: {
        const GpReport rep = gp_monitor(traj, cfg.energy_tolerance);
        add_check(m, "gp_energy_drift", rep.energy_ok, rep.max_energy_drift, cfg.energy_tolerance);
        add_check(m, "gp_mass_envelope_margin", rep.mass_ok, rep.mass_margin, 0.0);
        break;
      }
      case Scenario::plane_wave: {
        double err = std::numeric_limits<double>::infinity();
        if (cfg.profile == Profile::mode && !traj.blowup) {
          const double k = std::numbers::pi * cfg.mode / grid.half_width();
          const FieldState ref = sample(
              grid, traj.final_state.time,
              plane_wave_reference(grid, k, cplx{cfg.amp, 0.0}, spec.params.sign, spec.sigma));
          const double norm = std::sqrt(mass(ref));
          err = l2_distance(traj.final_state, ref) / (norm > 0.0 ? norm : 1.0);
        }
        add_check(m, "plane_wave_error", err <= 1e-8, err, 1e-8);
        break;
      }
      case Scenario::filament_corner:
        break;
    }

    if (out) {
      write_diagnostics(*out, cfg, traj.records());
      if (!written.empty()) {
        const fs::path snaps = prepare_dir(*out / "snapshots");
        for (const auto& e : traj.entries)
          if (e.snapshot && std::binary_search(written.begin(), written.end(), e.record.step))
            write_snapshot(snaps, e.record.step, *e.snapshot);
      }
    }
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (out) {
    write_text(*out / "manifest.json", m.to_json());
    write_text(*out / "timing.json", json({{"wall_seconds", m.wall_seconds}}).dump(2) + "\n");
  }
  return m;
}

}  // namespace dnls
