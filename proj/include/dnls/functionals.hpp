#pragma once
// Discrete functionals on a FieldState: mass, gradient, potential and energy
// for the active equation family. Quadrature is the rectangle rule on the
// periodic grid; derivatives are spectral.

#include <cstddef>
#include <vector>

#include "dnls/equation.hpp"
#include "dnls/fft.hpp"
#include "dnls/grid.hpp"

namespace dnls {

/// Per-record scalars. potential_l2 is ∫(|ψ+b|^2-|b|^2)^2; for α = 2 the
/// energy satisfies energy = grad_l2/2 ∓ g(t) potential_l2/4.
struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0;
  double grad_l2 = 0.0;
  double potential_l2 = 0.0;
  /// ∫F(|ψ+b|^2) with F' = |w|^α - |b|^α, F(|b|^2) = 0 (equals potential_l2/2 at α = 2).
  double potential_energy = 0.0;
  double energy = 0.0;
  /// ∫_{t_start}^t (-g'/2) ∫F, accumulated per step by the trapezoid rule.
  double cum_dissipation = 0.0;
  /// E(t) - E(t_start) ∓ cum_dissipation (zero for the exact flow).
  double energy_residual = 0.0;
  /// ½(mass - mass_start) - ∫ (mass-law right side) dt.
  double mass_residual = 0.0;
  /// max |ψ| over the outer 10% of the interval on each side.
  double boundary_contamination = 0.0;
  bool blowup = false;
};

/// Σ|ψ_j|^2 · 2L/n.
double mass(const FieldState& state);

/// Scratch-owning evaluator; one per integration.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const SpatialGrid& grid, const EquationSpec& spec);

  const EquationSpec& spec() const { return spec_; }

  double mass(const FieldState& state) const;
  /// ∫|ψ_x|^2 via Parseval on the spectral derivative.
  double grad_l2(const FieldState& state);
  double potential_l2(const FieldState& state);
  double potential_energy(const FieldState& state);
  /// ½∫|ψ_x|^2 - s (g(t)/2) ∫F.
  double energy(const FieldState& state);
  /// Right side of d/dt ½‖ψ‖^2 = -σ s g(t) ∫(|w|^α - |b|^α) Im(b ψ̄).
  double mass_flux(const FieldState& state);
  double boundary_contamination(const FieldState& state) const;

  /// Fills every functional of a record at state.time (cumulative fields untouched).
  void measure(const FieldState& state, DiagnosticsRecord& rec);

 private:
  void refresh_background(double t);
  void compute_shifted_abs2(const FieldState& state);

  SpatialGrid grid_;
  EquationSpec spec_;
  Fft fft_;
  std::vector<cplx> background_;
  double background_time_;
  std::vector<cplx> spectrum_;
  std::vector<double> rho_;
  std::vector<double> q_;
};

/// Energy of the conformal-frame perturbation,
/// E(t) = ½∫|ε_x|^2 ∓ (1/4t)∫(|ε+a|^2-|a|^2)^2 in the critical case.
/// Throws std::invalid_argument for non-conformal families.
double energy_conformal(const FieldState& eps, const EquationSpec& spec, double t);

}  // namespace dnls
