#include "dnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dnls/kernels.hpp"

namespace dnls {

double mass(const FieldState& state) {
  return kernels::active().sum_abs2(state.values.data(), state.size()) * state.grid.weight();
}

FunctionalEvaluator::FunctionalEvaluator(const SpatialGrid& grid, const EquationSpec& spec)
    : grid_(grid),
      spec_(spec),
      fft_(grid.size()),
      background_(grid.size()),
      background_time_(std::numeric_limits<double>::quiet_NaN()),
      spectrum_(grid.size()),
      rho_(grid.size()),
      q_(grid.size()) {
  if (spec_.static_background()) std::fill(background_.begin(), background_.end(), spec_.background_value());
}

void FunctionalEvaluator::refresh_background(double t) {
  if (spec_.static_background() || t == background_time_) return;
  for (std::size_t j = 0; j < grid_.size(); ++j) background_[j] = spec_.background(t, grid_.node(j));
  background_time_ = t;
}

void FunctionalEvaluator::compute_shifted_abs2(const FieldState& state) {
  refresh_background(state.time);
  kernels::active().abs2_shifted(rho_.data(), state.values.data(), background_.data(), grid_.size());
}

double FunctionalEvaluator::mass(const FieldState& state) const { return dnls::mass(state); }

double FunctionalEvaluator::grad_l2(const FieldState& state) {
  fft_.forward(state.values, spectrum_);
  const double scale = grid_.weight() / static_cast<double>(grid_.size());
  return kernels::active().sum_weighted_abs2(spectrum_.data(), grid_.frequencies_squared().data(),
                                             grid_.size()) *
         scale;
}

double FunctionalEvaluator::potential_l2(const FieldState& state) {
  refresh_background(state.time);
  return kernels::active().sum_potential(state.values.data(), background_.data(), grid_.size()) *
         grid_.weight();
}

double FunctionalEvaluator::potential_energy(const FieldState& state) {
  const double alpha = spec_.alpha();
  if (alpha == 2.0) return 0.5 * potential_l2(state);
  // F(ρ) = β^{p}[(1/p)((1+u)^p - 1) - u], p = (α+2)/2, β = |b|^2, u = ρ/β - 1.
  refresh_background(state.time);
  const double p = 0.5 * (alpha + 2.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const cplx psi = state.values[j];
    const cplx b = background_[j];
    const double beta = std::norm(b);
    if (beta == 0.0) {
      acc += std::pow(std::norm(psi + b), p) / p;
      continue;
    }
    const double drho = std::norm(psi) + 2.0 * (std::conj(b) * psi).real();
    const double u = drho / beta;
    acc += std::pow(beta, p) * (std::expm1(p * std::log1p(u)) / p - u);
  }
  return acc * grid_.weight();
}

double FunctionalEvaluator::energy(const FieldState& state) {
  const double kinetic = 0.5 * grad_l2(state);
  const double g = spec_.coefficient(state.time);
  return kinetic - spec_.nonlinear_sign() * 0.5 * g * potential_energy(state);
}

double FunctionalEvaluator::mass_flux(const FieldState& state) {
  compute_shifted_abs2(state);
  const double alpha = spec_.alpha();
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const double beta = std::norm(background_[j]);
    q_[j] = (alpha == 2.0) ? rho_[j] - beta : std::pow(rho_[j], 0.5 * alpha) - std::pow(beta, 0.5 * alpha);
  }
  const double integral =
      kernels::active().sum_flux(q_.data(), state.values.data(), background_.data(), grid_.size()) *
      grid_.weight();
  return -spec_.sigma * spec_.nonlinear_sign() * spec_.coefficient(state.time) * integral;
}

double FunctionalEvaluator::boundary_contamination(const FieldState& state) const {
  const double edge = 0.9 * grid_.half_width();
  double worst = 0.0;
  for (std::size_t j = 0; j < grid_.size(); ++j)
    if (std::abs(grid_.node(j)) >= edge) worst = std::max(worst, std::abs(state.values[j]));
  return worst;
}

void FunctionalEvaluator::measure(const FieldState& state, DiagnosticsRecord& rec) {
  rec.t = state.time;
  rec.mass = mass(state);
  rec.grad_l2 = grad_l2(state);
  rec.potential_l2 = potential_l2(state);
  rec.potential_energy = (spec_.alpha() == 2.0) ? 0.5 * rec.potential_l2 : potential_energy(state);
  rec.energy = 0.5 * rec.grad_l2 -
               spec_.nonlinear_sign() * 0.5 * spec_.coefficient(state.time) * rec.potential_energy;
  rec.boundary_contamination = boundary_contamination(state);
}

double energy_conformal(const FieldState& eps, const EquationSpec& spec, double t) {
  if (spec.family != Family::conformal_perturbation && spec.family != Family::critical_conformal)
    throw std::invalid_argument("energy_conformal: conformal families only");
  FieldState at_t = eps;
  at_t.time = t;
  FunctionalEvaluator eval(eps.grid, spec);
  return eval.energy(at_t);
}

}  // namespace dnls
