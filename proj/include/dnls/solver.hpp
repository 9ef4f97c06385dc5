#pragma once
// Strang split-step pseudospectral integrator on a periodic interval.
// The linear substep is solved exactly in Fourier space; the nonlinear
// substep is solved exactly pointwise (a unimodular rotation of ψ + b).

#include <cstddef>
#include <optional>
#include <vector>

#include "dnls/equation.hpp"
#include "dnls/fft.hpp"
#include "dnls/functionals.hpp"
#include "dnls/grid.hpp"

namespace dnls {

/// Exact flow of σ i ψ_t + ψ_xx = 0 over dt (dt < 0 back-propagates).
/// The returned state's time is state.time + dt.
FieldState free_flow(const FieldState& state, int sigma, double dt);

/// Exact flow of the nonlinear term alone from t to t + dt. Throws
/// std::domain_error when the coefficient integral over the substep diverges.
FieldState nonlinear_phase_step(const FieldState& state, const EquationSpec& spec, double t,
                                double dt);

/// free_flow(dt/2) ∘ nonlinear_phase_step(dt) ∘ free_flow(dt/2); time t + dt.
FieldState strang_step(const FieldState& state, const EquationSpec& spec, double t, double dt);

/// In-place stepping with per-instance transform plans and scratch buffers.
class SplitStepper {
 public:
  SplitStepper(const SpatialGrid& grid, const EquationSpec& spec);

  void free_flow(FieldState& state, double dt);
  void nonlinear(FieldState& state, double t, double dt);
  void strang(FieldState& state, double t, double dt);

 private:
  void prepare_multiplier(double dt);

  SpatialGrid grid_;
  EquationSpec spec_;
  Fft fft_;
  std::vector<cplx> spectrum_;
  std::vector<cplx> multiplier_;
  double multiplier_dt_;
  std::vector<cplx> background_;
  std::vector<double> theta_;
};

struct IntegrateOptions {
  /// A record is taken every `cadence` steps, plus the final step.
  std::size_t cadence = 1;
  /// Steps (mesh indices) at which a full snapshot is stored; each also
  /// forces a record.
  std::vector<std::size_t> snapshot_steps;
  /// Fault injection: advance with this equation while every functional
  /// and law residual is still measured with the declared one.
  std::optional<EquationSpec> propagator;
};

struct TrajectoryEntry {
  DiagnosticsRecord record;
  std::optional<FieldState> snapshot;
};

struct Trajectory {
  EquationSpec spec;
  TimeMesh mesh;
  std::vector<TrajectoryEntry> entries;
  FieldState final_state;
  bool blowup = false;

  const DiagnosticsRecord& first() const { return entries.front().record; }
  const DiagnosticsRecord& last() const { return entries.back().record; }
  std::vector<DiagnosticsRecord> records() const;
  /// Snapshot whose time matches t to relative tolerance `rtol`, if stored.
  const FieldState* snapshot_at(double t, double rtol = 1e-9) const;
};

/// Advances `initial` over the mesh with strang_step, recording diagnostics.
/// Stops at the first step whose state, mass flux or potential is
/// non-finite and marks that record (and the trajectory) as blow-up.
Trajectory integrate(const EquationSpec& spec, const FieldState& initial, const TimeMesh& mesh,
                     const IntegrateOptions& options = {});

/// Exact plane wave A e^{i(kx - ωt)} of σ i u_t + u_xx ± |u|^2 u = 0,
/// ω = σ(k^2 ∓ |A|^2). k must be a grid frequency.
Field1D plane_wave_reference(const SpatialGrid& grid, double k, cplx amplitude, Sign sign,
                             int sigma = +1);

}  // namespace dnls
