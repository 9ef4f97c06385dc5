#include "dnls/equation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dnls {
namespace {

// ∫_t^{t+dt} τ^{p} dτ without cancellation for small dt.
double power_integral(double t, double dt, double p) {
  if (!(t > 0.0) || !(t + dt > 0.0) || !std::isfinite(dt))
    throw std::domain_error("time-coefficient integral diverges: interval touches t <= 0");
  const double e = p + 1.0;
  const double l = std::log1p(dt / t);
  if (std::abs(e) <= kCriticalTolerance) return l;
  return std::pow(t, e) * std::expm1(e * l) / e;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::direct_perturbation: return "direct_perturbation";
    case Family::conformal_perturbation: return "conformal_perturbation";
    case Family::critical_conformal: return "critical_conformal";
    case Family::gross_pitaevskii: return "gross_pitaevskii";
    case Family::constant_cubic: return "constant_cubic";
  }
  return "unknown";
}

EquationSpec EquationSpec::direct(cplx a, double alpha, Sign sign, double t0) {
  EquationSpec s{Family::direct_perturbation, +1, {a, alpha, 1, sign}, t0};
  s.validate();
  return s;
}

EquationSpec EquationSpec::conformal(cplx a, double alpha, Sign sign, double t0) {
  EquationSpec s{Family::conformal_perturbation, -1, {a, alpha, 1, sign}, t0};
  s.validate();
  return s;
}

EquationSpec EquationSpec::critical(cplx a, Sign sign, double t0) {
  EquationSpec s{Family::critical_conformal, -1, {a, 2.0, 1, sign}, t0};
  s.validate();
  return s;
}

EquationSpec EquationSpec::gross_pitaevskii() {
  EquationSpec s{Family::gross_pitaevskii, +1, {cplx{1.0, 0.0}, 2.0, 1, Sign::defocusing}, 0.0};
  s.validate();
  return s;
}

EquationSpec EquationSpec::constant_cubic(Sign sign) {
  EquationSpec s{Family::constant_cubic, +1, {cplx{0.0, 0.0}, 2.0, 1, sign}, 0.0};
  s.validate();
  return s;
}

void EquationSpec::validate() const {
  params.validate();
  if (params.d != 1) throw std::invalid_argument("solver families are one-dimensional (d = 1)");
  const int expected_sigma =
      (family == Family::conformal_perturbation || family == Family::critical_conformal) ? -1 : +1;
  if (sigma != expected_sigma)
    throw std::invalid_argument(std::string("sigma does not match family ") +
                                std::string(family_name(family)));
  switch (family) {
    case Family::direct_perturbation:
    case Family::conformal_perturbation:
      if (!params.subcritical()) throw std::invalid_argument("perturbation families require alpha < 2/d");
      if (!(t0 > 0.0)) throw std::invalid_argument("initial time must be positive");
      break;
    case Family::critical_conformal:
      if (params.alpha != 2.0) throw std::invalid_argument("critical family requires alpha = 2");
      if (!(t0 > 0.0)) throw std::invalid_argument("initial time must be positive");
      break;
    case Family::gross_pitaevskii:
      if (params.alpha != 2.0 || params.a != cplx{1.0, 0.0} || params.sign != Sign::defocusing)
        throw std::invalid_argument("Gross-Pitaevskii requires alpha = 2, background 1, defocusing");
      break;
    case Family::constant_cubic:
      if (params.alpha != 2.0) throw std::invalid_argument("constant_cubic requires alpha = 2");
      break;
  }
}

cplx EquationSpec::background_value() const {
  switch (family) {
    case Family::conformal_perturbation:
    case Family::critical_conformal: return params.a;
    case Family::gross_pitaevskii: return {1.0, 0.0};
    case Family::constant_cubic: return {0.0, 0.0};
    case Family::direct_perturbation: break;
  }
  throw std::logic_error("background_value: time-dependent background");
}

cplx EquationSpec::background(double t, double x) const {
  if (family == Family::direct_perturbation) {
    const double xs[1] = {x};
    return eval_fa(params, t, xs);
  }
  return background_value();
}

double EquationSpec::coefficient(double t) const {
  switch (family) {
    case Family::conformal_perturbation: return std::pow(t, 0.5 * params.alpha * params.d - 2.0);
    case Family::critical_conformal: return 1.0 / t;
    default: return 1.0;
  }
}

double EquationSpec::coefficient_decay(double t) const {
  switch (family) {
    case Family::conformal_perturbation: {
      const double p = 0.5 * params.alpha * params.d - 2.0;
      return -p * std::pow(t, p - 1.0);
    }
    case Family::critical_conformal: return 1.0 / (t * t);
    default: return 0.0;
  }
}

double EquationSpec::coefficient_integral(double t, double dt) const {
  switch (family) {
    case Family::conformal_perturbation:
      return power_integral(t, dt, 0.5 * params.alpha * params.d - 2.0);
    case Family::critical_conformal: return power_integral(t, dt, -1.0);
    default:
      if (!std::isfinite(dt)) throw std::domain_error("non-finite time step");
      return dt;
  }
}

void TimeMesh::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end))
    throw std::invalid_argument("time mesh requires finite t_start < t_end");
  if (rule == MeshRule::logarithmic && !(t_start > 0.0))
    throw std::invalid_argument("logarithmic mesh requires t_start > 0");
  if (rule == MeshRule::uniform && t_start < 0.0)
    throw std::invalid_argument("uniform mesh requires t_start >= 0");
}

double TimeMesh::time(std::size_t k) const {
  if (k == 0) return t_start;
  if (k >= steps) return t_end;
  const double frac = static_cast<double>(k) / static_cast<double>(steps);
  if (rule == MeshRule::uniform) return t_start + (t_end - t_start) * frac;
  return t_start * std::exp(frac * std::log(t_end / t_start));
}

std::vector<double> TimeMesh::times() const {
  std::vector<double> out(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out[k] = time(k);
  return out;
}

MeshRule TimeMesh::natural_rule(Family f) {
  return (f == Family::conformal_perturbation || f == Family::critical_conformal)
             ? MeshRule::logarithmic
             : MeshRule::uniform;
}

}  // namespace dnls
