#pragma once
// Free-profile post-processing of conformal trajectories: back-propagated
// profiles, their dyadic Cauchy tail, the estimated scattering state and
// the small-time residual of the reconstructed physical solution.

#include <cstddef>
#include <vector>

#include "dnls/closed_forms.hpp"
#include "dnls/grid.hpp"
#include "dnls/solver.hpp"

namespace dnls {

/// Inverse free flow from state.time to t_base; the result is at t_base.
FieldState back_propagate(const FieldState& state, int sigma, double t_base);

/// Discrete H^s distance, s ∈ {0, 1, 2}: sqrt(Σ (1+ξ^2)^s |â-b̂|^2 · h/n).
double sobolev_distance(const FieldState& a, const FieldState& b, int s);

struct ScatterProfile {
  double t_base = 0.0;
  std::vector<double> times;
  std::vector<FieldState> profiles;
  /// distances[i][j] = sobolev_distance(profiles[i], profiles[j], s).
  std::vector<std::vector<double>> distances;
};

/// Back-propagates every stored snapshot of the trajectory to t_base.
ScatterProfile scatter_profile(const Trajectory& traj, double t_base, int s = 0);

/// Mesh steps whose times are t_start·2^k (to 1e-9 relative), k = 0, 1, ...
std::vector<std::size_t> dyadic_steps(const TimeMesh& mesh);

/// d_k = ‖φ(2^{k+1} t_0) - φ(2^k t_0)‖_2 over the stored dyadic snapshots,
/// φ(t) = back_propagate(ε(t), σ, 0). Throws std::invalid_argument when
/// fewer than three dyadic snapshots are stored (insufficient horizon).
std::vector<double> cauchy_tail(const Trajectory& traj);

struct ScatteringState {
  FieldState profile;
  /// Estimated ‖profile - ε₊‖_2 from the geometric tail of d_k
  /// (+inf when the tail is not contracting).
  double tail_error = 0.0;
  double tail_ratio = 0.0;
  bool extrapolated = false;
};

/// ε₊ estimated as the last dyadic profile; with `extrapolate`, one
/// Richardson step using the tail ratio λ = 2^{αd/2-1} of the coefficient
/// integral: (φ(2T) - λφ(T)) / (1 - λ).
ScatteringState estimate_scattering_state(const Trajectory& traj, bool extrapolate);

/// (1/(2√π)) ∫ e^{-i y^2 t/4} e^{i x y/2} ε₊(y) dy by direct quadrature at
/// the points xs; t = 0 gives the limit profile ε̂₊(-x/2)/(2√π).
std::vector<cplx> free_profile_image(const FieldState& eps_plus, double t,
                                     const std::vector<double>& xs);

enum class SmallTimeTarget { limit, exact_free };

struct SmallTimeResidual {
  double t_requested = 0.0;
  /// 1 / (conformal time of the snapshot used).
  double t_used = 0.0;
  double residual = 0.0;
};

/// For each physical t, picks the snapshot at conformal time s ≈ 1/t
/// (|s t - 1| ≤ match_tolerance) and returns the L2 norm, over x = t·y_j
/// with weight t·h, of reconstruct_u - eval_u_selfsim minus the target
/// image of ε₊ (its t ↓ 0 limit, or the exact free image at t).
/// Throws std::invalid_argument when no snapshot matches or the
/// trajectory is not a conformal one-dimensional run.
std::vector<SmallTimeResidual> small_time_limit_residual(
    const Trajectory& traj, const FieldState& eps_plus, const std::vector<double>& t_phys,
    SmallTimeTarget target = SmallTimeTarget::limit, double match_tolerance = 2e-2);

}  // namespace dnls
