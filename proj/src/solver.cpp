#include "dnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dnls/kernels.hpp"

namespace dnls {

SplitStepper::SplitStepper(const SpatialGrid& grid, const EquationSpec& spec)
    : grid_(grid),
      spec_(spec),
      fft_(grid.size()),
      spectrum_(grid.size()),
      multiplier_(grid.size()),
      multiplier_dt_(std::numeric_limits<double>::quiet_NaN()),
      background_(grid.size()),
      theta_(grid.size()) {
  spec_.validate();
  if (spec_.static_background())
    std::fill(background_.begin(), background_.end(), spec_.background_value());
}

void SplitStepper::prepare_multiplier(double dt) {
  if (dt == multiplier_dt_) return;
  // exp(-σ i ξ^2 dt)
  kernels::active().phase_factors(multiplier_.data(), grid_.frequencies_squared().data(),
                                  -spec_.sigma * dt, grid_.size());
  multiplier_dt_ = dt;
}

void SplitStepper::free_flow(FieldState& state, double dt) {
  if (dt != 0.0) {
    prepare_multiplier(dt);
    fft_.forward(state.values, spectrum_);
    kernels::active().multiply(spectrum_.data(), multiplier_.data(), grid_.size());
    fft_.inverse(spectrum_, state.values);
  }
  state.time += dt;
}

void SplitStepper::nonlinear(FieldState& state, double t, double dt) {
  const auto& k = kernels::active();
  const std::size_t n = grid_.size();
  const double orientation = spec_.sigma * spec_.nonlinear_sign();
  const double alpha = spec_.alpha();

  if (spec_.static_background()) {
    const double coef = orientation * spec_.coefficient_integral(t, dt);
    if (!std::isfinite(coef)) throw std::domain_error("nonlinear substep: non-finite phase");
    if (alpha == 2.0) {
      k.cubic_phase(state.values.data(), background_.data(), coef, n);
    } else {
      k.abs2_shifted(theta_.data(), state.values.data(), background_.data(), n);
      const double b_pow = std::pow(std::norm(spec_.background_value()), 0.5 * alpha);
      for (std::size_t j = 0; j < n; ++j) theta_[j] = coef * (std::pow(theta_[j], 0.5 * alpha) - b_pow);
      k.rotate(state.values.data(), background_.data(), theta_.data(), n);
    }
  } else {
    // Background frozen at the substep midpoint; |f_a|^α integrated exactly.
    const double t_mid = t + 0.5 * dt;
    for (std::size_t j = 0; j < n; ++j) background_[j] = spec_.background(t_mid, grid_.node(j));
    const double e = 1.0 - 0.5 * alpha;
    if (!(t > 0.0) || !(t + dt > 0.0)) throw std::domain_error("nonlinear substep: t must stay positive");
    const double l = std::log1p(dt / t);
    const double power_integral =
        std::abs(e) <= kCriticalTolerance ? l : std::pow(t, e) * std::expm1(e * l) / e;
    const double b_term = std::pow(std::abs(spec_.params.a), alpha) * power_integral;
    if (!std::isfinite(b_term)) throw std::domain_error("nonlinear substep: non-finite phase");
    k.abs2_shifted(theta_.data(), state.values.data(), background_.data(), n);
    for (std::size_t j = 0; j < n; ++j)
      theta_[j] = orientation * (dt * std::pow(theta_[j], 0.5 * alpha) - b_term);
    k.rotate(state.values.data(), background_.data(), theta_.data(), n);
  }
  state.time = t + dt;
}

void SplitStepper::strang(FieldState& state, double t, double dt) {
  free_flow(state, 0.5 * dt);
  nonlinear(state, t, dt);
  free_flow(state, 0.5 * dt);
  state.time = t + dt;
}

FieldState free_flow(const FieldState& state, int sigma, double dt) {
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("free_flow: sigma must be +1 or -1");
  // Only sigma matters for the linear flow; any family with that sigma works.
  const EquationSpec spec = sigma > 0 ? EquationSpec::constant_cubic(Sign::defocusing)
                                      : EquationSpec::critical(cplx{1.0, 0.0}, Sign::defocusing, 1.0);
  SplitStepper stepper(state.grid, spec);
  FieldState out = state;
  stepper.free_flow(out, dt);
  return out;
}

FieldState nonlinear_phase_step(const FieldState& state, const EquationSpec& spec, double t,
                                double dt) {
  SplitStepper stepper(state.grid, spec);
  FieldState out = state;
  stepper.nonlinear(out, t, dt);
  return out;
}

FieldState strang_step(const FieldState& state, const EquationSpec& spec, double t, double dt) {
  SplitStepper stepper(state.grid, spec);
  FieldState out = state;
  stepper.strang(out, t, dt);
  return out;
}

std::vector<DiagnosticsRecord> Trajectory::records() const {
  std::vector<DiagnosticsRecord> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.record);
  return out;
}

const FieldState* Trajectory::snapshot_at(double t, double rtol) const {
  for (const auto& e : entries)
    if (e.snapshot && std::abs(e.snapshot->time - t) <= rtol * std::max(1.0, std::abs(t)))
      return &*e.snapshot;
  return nullptr;
}

Trajectory integrate(const EquationSpec& spec, const FieldState& initial, const TimeMesh& mesh,
                     const IntegrateOptions& options) {
  spec.validate();
  mesh.validate();
  if (std::abs(initial.time - mesh.t_start) > 1e-12 * std::max(1.0, std::abs(mesh.t_start)))
    throw std::invalid_argument("integrate: initial state is not at the mesh start time");
  if (options.cadence == 0) throw std::invalid_argument("integrate: cadence must be positive");

  std::vector<std::size_t> snaps = options.snapshot_steps;
  std::sort(snaps.begin(), snaps.end());
  auto wants_snapshot = [&](std::size_t k) { return std::binary_search(snaps.begin(), snaps.end(), k); };

  Trajectory traj{spec, mesh, {}, initial, false};
  FieldState& state = traj.final_state;
  state.time = mesh.t_start;

  SplitStepper stepper(initial.grid, options.propagator.value_or(spec));
  FunctionalEvaluator eval(initial.grid, spec);
  const int s = spec.nonlinear_sign();

  DiagnosticsRecord rec0;
  eval.measure(state, rec0);
  rec0.step = 0;
  rec0.blowup = !state.finite() || !std::isfinite(rec0.mass) || !std::isfinite(rec0.energy);
  traj.entries.push_back({rec0, wants_snapshot(0) ? std::optional<FieldState>(state) : std::nullopt});
  if (rec0.blowup) {
    traj.blowup = true;
    return traj;
  }

  double dissipation = 0.0, flux_integral = 0.0;
  double prev_t = mesh.t_start;
  double prev_rate = 0.5 * spec.coefficient_decay(prev_t) * rec0.potential_energy;
  double prev_flux = eval.mass_flux(state);
  const bool dissipative = spec.family == Family::conformal_perturbation ||
                           spec.family == Family::critical_conformal;

  for (std::size_t k = 0; k < mesh.steps; ++k) {
    const double t1 = mesh.time(k + 1);
    stepper.strang(state, prev_t, t1 - prev_t);

    const double pe = dissipative ? eval.potential_energy(state) : 0.0;
    const double rate = 0.5 * spec.coefficient_decay(t1) * pe;
    const double flux = eval.mass_flux(state);
    dissipation += 0.5 * (t1 - prev_t) * (prev_rate + rate);
    flux_integral += 0.5 * (t1 - prev_t) * (prev_flux + flux);
    prev_t = t1;
    prev_rate = rate;
    prev_flux = flux;

    const std::size_t step = k + 1;
    const bool broken = !std::isfinite(pe) || !std::isfinite(flux) || !state.finite();
    const bool snap = wants_snapshot(step);
    if (!broken && !snap && step % options.cadence != 0 && step != mesh.steps) continue;

    DiagnosticsRecord rec;
    eval.measure(state, rec);
    rec.step = step;
    rec.cum_dissipation = dissipation;
    rec.energy_residual = rec.energy - rec0.energy - s * dissipation;
    rec.mass_residual = 0.5 * (rec.mass - rec0.mass) - flux_integral;
    rec.blowup = broken || !std::isfinite(rec.mass) || !std::isfinite(rec.energy);
    traj.entries.push_back({rec, snap ? std::optional<FieldState>(state) : std::nullopt});
    if (rec.blowup) {
      traj.blowup = true;
      break;
    }
  }
  return traj;
}

Field1D plane_wave_reference(const SpatialGrid& grid, double k, cplx amplitude, Sign sign,
                             int sigma) {
  if (!grid.is_grid_frequency(k))
    throw std::invalid_argument("plane_wave_reference: k is not a grid frequency");
  if (sigma != 1 && sigma != -1) throw std::invalid_argument("plane_wave_reference: bad sigma");
  const double omega = sigma * (k * k - sign_value(sign) * std::norm(amplitude));
  return [=](double t, double x) { return amplitude * std::polar(1.0, k * x - omega * t); };
}

}  // namespace dnls
