#pragma once
// Explicit self-similar solutions of i u_t + Δu ± |u|^α u = 0 emanating
// from a Dirac mass, and the exact symmetry / change-of-variable maps
// acting on them. General dimension d; pure functions.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "dnls/grid.hpp"

namespace dnls {

/// Sign of the nonlinear term: + focusing, - defocusing.
enum class Sign : int { focusing = 1, defocusing = -1 };

constexpr int sign_value(Sign s) { return static_cast<int>(s); }

/// |αd - 2| below this selects the logarithmic (critical) phase.
inline constexpr double kCriticalTolerance = 1e-12;

struct SelfSimilarParams {
  cplx a{1.0, 0.0};
  double alpha = 2.0;
  int d = 1;
  Sign sign = Sign::defocusing;

  bool critical() const;
  bool subcritical() const;
  /// Throws std::invalid_argument on alpha < 0, d < 1 or non-finite values.
  void validate() const;
};

struct GalileanBoost {
  std::vector<double> nu;
};

/// Field in d space dimensions, evaluated lazily.
using FieldND = std::function<cplx(double t, std::span<const double> x)>;

/// (it)^{d/2} on the principal branch: t^{d/2} e^{iπd/4}.
cplx it_power(double t, int d);

/// f_a(t,x) = a e^{i|x|^2/4t} / (it)^{d/2}; solves the free equation.
cplx eval_fa(const SelfSimilarParams& p, double t, std::span<const double> x);

/// A_{a,α}(t): |a|^α t^{1-αd/2}/(1-αd/2), or |a|^{2/d} log t at criticality.
double eval_phase_A(const SelfSimilarParams& p, double t);

/// u_{a,±α} = f_a e^{±iA}.
cplx eval_u_selfsim(const SelfSimilarParams& p, double t, std::span<const double> x);

/// e^{-it|ν|^2 + iν·x} u(t, x - 2νt).
cplx galilean_transform(const FieldND& u, const GalileanBoost& boost, double t,
                        std::span<const double> x);

/// T(f)(t,x) = e^{i|x|^2/4t}/(it)^{d/2} f(1/t, x/t).
cplx conformal_transform(const FieldND& f, int d, double t, std::span<const double> x);

/// Callable wrapper of eval_u_selfsim.
FieldND selfsim_field(const SelfSimilarParams& p);

/// Band-limited (trigonometric) interpolant of periodic samples.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const FieldState& state);
  /// Throws std::out_of_range when y lies outside [-L, L].
  cplx operator()(double y) const;
  const SpatialGrid& grid() const { return grid_; }
  double time() const { return time_; }

 private:
  SpatialGrid grid_;
  double time_;
  std::vector<cplx> coefficients_;
};

/// Physical solution rebuilt from a conformal-frame perturbation ε sampled at
/// conformal time 1/t (d = 1):
///   u = u_{a,±α}(t,x) + e^{ix^2/4t}/(it)^{1/2} e^{±iA(t)} ε(1/t, x/t).
cplx reconstruct_u(const TrigInterpolant& eps, const SelfSimilarParams& p, double t, double x);
cplx reconstruct_u(const FieldState& eps, const SelfSimilarParams& p, double t, double x);

}  // namespace dnls
