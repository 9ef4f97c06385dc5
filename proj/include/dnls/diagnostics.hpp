#pragma once
// Law-residual monitors and a-priori bound checks over recorded
// trajectories, plus the geometric energy of a curvature/torsion pair and
// the two-term power inequality harness.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnls/functionals.hpp"
#include "dnls/solver.hpp"

namespace dnls {

/// Per-interval energy-law mismatch between consecutive records:
/// (E_{k+1} - E_k) - s (D_{k+1} - D_k), with D the per-step trapezoid of
/// (-g'/2)∫F. Throws std::invalid_argument with fewer than two records.
std::vector<double> energy_law_residual(const Trajectory& traj);

/// Per-interval mass-law mismatch between consecutive records:
/// ½(m_{k+1} - m_k) minus the trapezoid of the mass-law right side.
std::vector<double> mass_law_residual(const Trajectory& traj);

struct BoundViolation {
  std::size_t record = 0;  ///< index into the trajectory's entries
  double t = 0.0;
  std::string check;
  double value = 0.0;
  double bound = 0.0;
};

struct AprioriReport {
  double energy_start = 0.0;
  /// min over records of bound - value (negative means violated).
  double grad_margin = 0.0;
  double potential_margin = 0.0;
  /// Only meaningful for the critical family; +inf otherwise.
  double mass_margin = 0.0;
  /// 4 E(t_start) - ∫∫(|ε+a|^2-|a|^2)^2 dx dt/t^2 (critical family).
  double dissipation_margin = 0.0;
  std::optional<BoundViolation> violation;

  bool passed() const { return !violation.has_value(); }
};

/// Checks at every record of a defocusing conformal/critical run:
///   ∫|ε_x|^2 ≤ 2E(t_start),  (g/2)∫F ≤ E(t_start)  (at α = 2: ∫(...)^2 ≤ 4tE),
///   ‖ε(t)‖ ≤ ‖ε(t_start)‖ + 4|a|√E(t_start)(√t - √t_start)  (critical only),
///   ∫∫(...)^2 dt/t^2 ≤ 4E(t_start)  (critical only).
/// `slack` is added to E(t_start) to absorb the discretization error of the
/// energy law; it is a fixed tolerance, never the run's own residual, so a
/// wrong propagator cannot widen its own bound.
/// Throws std::invalid_argument for other families or focusing runs.
AprioriReport check_apriori_bounds(const Trajectory& traj, double slack);

struct GpReport {
  double energy_start = 0.0;
  double max_energy_drift = 0.0;
  /// min over records of 2√E(0)t + ‖u_0‖ - ‖u(t)‖.
  double mass_margin = 0.0;
  bool energy_ok = false;
  bool mass_ok = false;

  bool passed() const { return energy_ok && mass_ok; }
};

/// Energy flatness (to `energy_tolerance`) and the affine mass envelope for
/// a Gross-Pitaevskii run. Throws std::invalid_argument for other families.
GpReport gp_monitor(const Trajectory& traj, double energy_tolerance = 1e-6);

struct GeometricEnergyRecord {
  double t = 0.0;
  double value = 0.0;
  /// ∫(c_x^2 + c^2 (x/2t - τ)^2)
  double shape_integral = 0.0;
  /// ∫(t c^2 - c_0^2)^2
  double amplitude_integral = 0.0;
};

/// (t^2/4√2)·shape + (1/16√2)·amplitude on the periodic grid; c_x spectral.
GeometricEnergyRecord geometric_energy(const SpatialGrid& grid, std::span<const double> c,
                                       std::span<const double> tau, double t, double c0);

/// ||x+y|^r - |y|^r| / (|y|^{r-1}|x| + |x|^r). Throws on y = 0 or r < 0.
double lemma_bound_ratio(cplx x, cplx y, double r);
/// ||x+y|^r - |y|^r| / (|y|^{r-1}|x|), the sharper denominator.
double lemma_restricted_ratio(cplx x, cplx y, double r);

struct LemmaHarnessReport {
  std::size_t samples = 0;
  double max_ratio = 0.0;
  std::size_t restricted_samples = 0;
  double max_restricted_ratio = 0.0;
};

/// Random |x|, |y| log-uniform in [1e-6, 1e6], uniform arguments,
/// r uniform in [0, 4]. Restricted samples are those with r ≤ 1 or
/// |x| ≤ |y|/4.
LemmaHarnessReport lemma_harness(std::size_t samples, std::uint64_t seed);

/// Frozen regression bounds for the harness.
inline constexpr double kLemmaRatioBound = 8.0;
inline constexpr double kLemmaRestrictedBound = 8.0;

}  // namespace dnls
