#include "dnls/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dnls/fft.hpp"

namespace dnls {

FieldState back_propagate(const FieldState& state, int sigma, double t_base) {
  FieldState out = free_flow(state, sigma, t_base - state.time);
  out.time = t_base;
  return out;
}

double sobolev_distance(const FieldState& a, const FieldState& b, int s) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("sobolev_distance: grids differ");
  if (s < 0 || s > 2) throw std::invalid_argument("sobolev_distance: s must be 0, 1 or 2");
  const std::size_t n = a.size();
  const double h = a.grid.weight();
  if (s == 0) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(acc * h);
  }
  std::vector<cplx> diff(n), spec(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = a.values[j] - b.values[j];
  Fft fft(n);
  fft.forward(diff, spec);
  const auto xi2 = a.grid.frequencies_squared();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::pow(1.0 + xi2[k], s) * std::norm(spec[k]);
  return std::sqrt(acc * h / static_cast<double>(n));
}

ScatterProfile scatter_profile(const Trajectory& traj, double t_base, int s) {
  ScatterProfile out;
  out.t_base = t_base;
  for (const auto& e : traj.entries) {
    if (!e.snapshot) continue;
    out.times.push_back(e.snapshot->time);
    out.profiles.push_back(back_propagate(*e.snapshot, traj.spec.sigma, t_base));
  }
  const std::size_t m = out.profiles.size();
  out.distances.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      out.distances[i][j] = out.distances[j][i] = sobolev_distance(out.profiles[i], out.profiles[j], s);
  return out;
}

std::vector<std::size_t> dyadic_steps(const TimeMesh& mesh) {
  mesh.validate();
  std::vector<std::size_t> out;
  if (!(mesh.t_start > 0.0)) return out;
  const auto times = mesh.times();
  std::size_t k = 0;
  for (double target = mesh.t_start; target <= mesh.t_end * (1.0 + 1e-12); target *= 2.0) {
    while (k < times.size() && times[k] < target * (1.0 - 1e-9)) ++k;
    if (k == times.size()) break;
    if (std::abs(times[k] - target) <= 1e-9 * target) out.push_back(k);
  }
  return out;
}

namespace {

std::vector<const FieldState*> dyadic_snapshots(const Trajectory& traj) {
  std::vector<const FieldState*> out;
  for (std::size_t k : dyadic_steps(traj.mesh)) {
    const FieldState* s = traj.snapshot_at(traj.mesh.time(k));
    if (!s) break;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<double> cauchy_tail(const Trajectory& traj) {
  const auto snaps = dyadic_snapshots(traj);
  if (snaps.size() < 3) throw std::invalid_argument("cauchy_tail: insufficient dyadic horizon");
  std::vector<FieldState> phi;
  phi.reserve(snaps.size());
  for (const FieldState* s : snaps) phi.push_back(back_propagate(*s, traj.spec.sigma, 0.0));
  std::vector<double> d;
  for (std::size_t k = 0; k + 1 < phi.size(); ++k) d.push_back(l2_distance(phi[k + 1], phi[k]));
  return d;
}

ScatteringState estimate_scattering_state(const Trajectory& traj, bool extrapolate) {
  const auto snaps = dyadic_snapshots(traj);
  if (snaps.size() < 3) throw std::invalid_argument("estimate_scattering_state: insufficient dyadic horizon");
  const std::vector<double> d = cauchy_tail(traj);
  const double last = d.back();
  const double prev = d[d.size() - 2];
  ScatteringState out{back_propagate(*snaps.back(), traj.spec.sigma, 0.0), 0.0, 0.0, false};
  out.tail_ratio = prev > 0.0 ? last / prev : 0.0;
  if (last == 0.0) {
    out.tail_error = 0.0;
  } else if (out.tail_ratio < 1.0) {
    out.tail_error = last * out.tail_ratio / (1.0 - out.tail_ratio);
  } else {
    out.tail_error = std::numeric_limits<double>::infinity();
  }
  if (extrapolate) {
    const auto& p = traj.spec.params;
    const double lambda = std::pow(2.0, 0.5 * p.alpha * p.d - 1.0);
    if (!(lambda < 1.0)) throw std::invalid_argument("estimate_scattering_state: extrapolation needs a subcritical run");
    const FieldState before = back_propagate(*snaps[snaps.size() - 2], traj.spec.sigma, 0.0);
    for (std::size_t j = 0; j < out.profile.size(); ++j)
      out.profile.values[j] = (out.profile.values[j] - lambda * before.values[j]) / (1.0 - lambda);
    out.extrapolated = true;
    // The remaining error is the next-order term; the geometric estimate
    // above bounds the unextrapolated error and is kept as a budget.
  }
  return out;
}

std::vector<cplx> free_profile_image(const FieldState& eps_plus, double t, const std::vector<double>& xs) {
  const std::size_t n = eps_plus.size();
  const double h = eps_plus.grid.weight();
  const double scale = h / (2.0 * std::sqrt(std::numbers::pi));
  std::vector<cplx> weighted(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double y = eps_plus.grid.node(m);
    weighted[m] = eps_plus.values[m] * std::polar(scale, -y * y * t / 4.0);
  }
  std::vector<cplx> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double half_x = 0.5 * xs[i];
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) acc += weighted[m] * std::polar(1.0, half_x * eps_plus.grid.node(m));
    out[i] = acc;
  }
  return out;
}

std::vector<SmallTimeResidual> small_time_limit_residual(const Trajectory& traj,
                                                         const FieldState& eps_plus,
                                                         const std::vector<double>& t_phys,
                                                         SmallTimeTarget target,
                                                         double match_tolerance) {
  const EquationSpec& spec = traj.spec;
  if (spec.family != Family::conformal_perturbation && spec.family != Family::critical_conformal)
    throw std::invalid_argument("small_time_limit_residual: conformal runs only");
  if (spec.params.d != 1) throw std::invalid_argument("small_time_limit_residual: d = 1 only");

  std::vector<SmallTimeResidual> out;
  for (double t : t_phys) {
    if (!(t > 0.0)) throw std::invalid_argument("small_time_limit_residual: t must be positive");
    const FieldState* best = nullptr;
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& e : traj.entries) {
      if (!e.snapshot) continue;
      const double gap = std::abs(e.snapshot->time * t - 1.0);
      if (gap < best_gap) {
        best_gap = gap;
        best = &*e.snapshot;
      }
    }
    if (!best || best_gap > match_tolerance)
      throw std::invalid_argument("small_time_limit_residual: no snapshot near conformal time 1/t");

    const double tu = 1.0 / best->time;
    const std::size_t n = best->size();
    std::vector<double> xs(n);
    for (std::size_t j = 0; j < n; ++j) xs[j] = tu * best->grid.node(j);
    const std::vector<cplx> image =
        free_profile_image(eps_plus, target == SmallTimeTarget::limit ? 0.0 : tu, xs);
    // reconstruct_u - eval_u_selfsim, evaluated at the nodes y_j = x_j / t.
    const double phase_A = sign_value(spec.params.sign) * eval_phase_A(spec.params, tu);
    const cplx inv_root = 1.0 / it_power(tu, 1);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx u = std::polar(1.0, xs[j] * xs[j] / (4.0 * tu) + phase_A) * inv_root * best->values[j];
      acc += std::norm(u - image[j]);
    }
    out.push_back({t, tu, std::sqrt(acc * tu * best->grid.weight())});
  }
  return out;
}

}  // namespace dnls
