#pragma once
// Parameterization of the one-dimensional evolution equations handled by
// the split-step solver. Every family is written as
//
//   σ i ψ_t + ψ_xx + s g(t) (|ψ + b|^α - |b|^α)(ψ + b) = 0,
//
// where ψ is the evolved unknown, b(t,x) the background it perturbs,
// s = ±1 the focusing/defocusing sign and g the time coefficient.

#include <cstddef>
#include <string_view>
#include <vector>

#include "dnls/closed_forms.hpp"

namespace dnls {

enum class Family {
  direct_perturbation,     ///< η around f_a: σ=+1, g=1, b=f_a(t,x)
  conformal_perturbation,  ///< ε around a: σ=-1, g=t^{αd/2-2}, b=a
  critical_conformal,      ///< ε around a, α=2: σ=-1, g=1/t, b=a
  gross_pitaevskii,        ///< u=ψ-1: σ=+1, g=1, b=1, α=2, defocusing
  constant_cubic,          ///< u itself: σ=+1, g=1, b=0, α=2
};

std::string_view family_name(Family f);

struct EquationSpec {
  Family family = Family::critical_conformal;
  int sigma = -1;
  SelfSimilarParams params;
  double t0 = 1.0;

  static EquationSpec direct(cplx a, double alpha, Sign sign, double t0);
  static EquationSpec conformal(cplx a, double alpha, Sign sign, double t0);
  static EquationSpec critical(cplx a, Sign sign, double t0);
  static EquationSpec gross_pitaevskii();
  static EquationSpec constant_cubic(Sign sign);

  /// Throws std::invalid_argument when the family constraints are violated.
  void validate() const;

  int nonlinear_sign() const { return sign_value(params.sign); }
  double alpha() const { return params.alpha; }

  /// True when b does not depend on time.
  bool static_background() const { return family != Family::direct_perturbation; }
  /// Constant background value for the static families.
  cplx background_value() const;
  /// b(t, x).
  cplx background(double t, double x) const;

  /// g(t).
  double coefficient(double t) const;
  /// -g'(t), the weight of the explicit-time energy dissipation.
  double coefficient_decay(double t) const;
  /// Exact ∫_t^{t+dt} g. Throws std::domain_error when divergent.
  double coefficient_integral(double t, double dt) const;
};

enum class MeshRule { uniform, logarithmic };

/// Step times of an integration. Logarithmic meshes are uniform in log t.
struct TimeMesh {
  double t_start = 1.0;
  double t_end = 2.0;
  std::size_t steps = 100;
  MeshRule rule = MeshRule::logarithmic;

  void validate() const;
  double time(std::size_t k) const;
  std::vector<double> times() const;
  /// The rule natural to a family: logarithmic for conformal families.
  static MeshRule natural_rule(Family f);
};

}  // namespace dnls
