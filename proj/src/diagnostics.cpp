#include "dnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dnls/fft.hpp"

namespace dnls {

namespace {

void require_two_records(const Trajectory& traj) {
  if (traj.entries.size() < 2) throw std::invalid_argument("law residual: need at least two records");
}

}  // namespace

std::vector<double> energy_law_residual(const Trajectory& traj) {
  require_two_records(traj);
  std::vector<double> out;
  out.reserve(traj.entries.size() - 1);
  for (std::size_t k = 0; k + 1 < traj.entries.size(); ++k)
    out.push_back(traj.entries[k + 1].record.energy_residual - traj.entries[k].record.energy_residual);
  return out;
}

std::vector<double> mass_law_residual(const Trajectory& traj) {
  require_two_records(traj);
  std::vector<double> out;
  out.reserve(traj.entries.size() - 1);
  for (std::size_t k = 0; k + 1 < traj.entries.size(); ++k)
    out.push_back(traj.entries[k + 1].record.mass_residual - traj.entries[k].record.mass_residual);
  return out;
}

AprioriReport check_apriori_bounds(const Trajectory& traj, double slack) {
  const EquationSpec& spec = traj.spec;
  if (spec.family != Family::conformal_perturbation && spec.family != Family::critical_conformal)
    throw std::invalid_argument("check_apriori_bounds: conformal families only");
  if (spec.params.sign != Sign::defocusing)
    throw std::invalid_argument("check_apriori_bounds: defocusing runs only");
  if (traj.entries.empty()) throw std::invalid_argument("check_apriori_bounds: empty trajectory");

  const bool critical = spec.family == Family::critical_conformal;
  const DiagnosticsRecord& r0 = traj.first();
  AprioriReport rep;
  rep.energy_start = r0.energy;
  rep.grad_margin = rep.potential_margin = std::numeric_limits<double>::infinity();
  rep.mass_margin = rep.dissipation_margin = std::numeric_limits<double>::infinity();
  const double norm0 = std::sqrt(r0.mass);
  const double a_mod = std::abs(spec.params.a);
  const double e0 = std::max(r0.energy, 0.0) + slack;

  auto note = [&](std::size_t k, const DiagnosticsRecord& r, const char* name, double value,
                  double bound, double& margin) {
    margin = std::min(margin, bound - value);
    if (!(value <= bound) && !rep.violation) rep.violation = BoundViolation{k, r.t, name, value, bound};
  };

  for (std::size_t k = 0; k < traj.entries.size(); ++k) {
    const DiagnosticsRecord& r = traj.entries[k].record;
    note(k, r, "gradient", r.grad_l2, 2.0 * e0, rep.grad_margin);
    const double pot = 0.5 * spec.coefficient(r.t) * r.potential_energy;
    note(k, r, "potential", pot, e0, rep.potential_margin);
    if (critical) {
      const double envelope =
          norm0 + 4.0 * a_mod * std::sqrt(e0) * (std::sqrt(r.t) - std::sqrt(r0.t)) + slack;
      note(k, r, "mass", std::sqrt(r.mass), envelope, rep.mass_margin);
      // cum_dissipation = ∫ P/(4t^2) dt at α = 2.
      note(k, r, "dissipation", 4.0 * r.cum_dissipation, 4.0 * e0, rep.dissipation_margin);
    }
    if (r.blowup && !rep.violation)
      rep.violation = BoundViolation{k, r.t, "finite", std::numeric_limits<double>::quiet_NaN(), 0.0};
  }
  return rep;
}

GpReport gp_monitor(const Trajectory& traj, double energy_tolerance) {
  if (traj.spec.family != Family::gross_pitaevskii)
    throw std::invalid_argument("gp_monitor: Gross-Pitaevskii runs only");
  if (traj.entries.empty()) throw std::invalid_argument("gp_monitor: empty trajectory");
  const DiagnosticsRecord& r0 = traj.first();
  GpReport rep;
  rep.energy_start = r0.energy;
  rep.mass_margin = std::numeric_limits<double>::infinity();
  const double norm0 = std::sqrt(r0.mass);
  const double rate = 2.0 * std::sqrt(std::max(r0.energy, 0.0));
  bool finite = true;
  for (const auto& e : traj.entries) {
    const DiagnosticsRecord& r = e.record;
    finite = finite && !r.blowup;
    rep.max_energy_drift = std::max(rep.max_energy_drift, std::abs(r.energy - r0.energy));
    rep.mass_margin = std::min(rep.mass_margin, rate * (r.t - r0.t) + norm0 - std::sqrt(r.mass));
  }
  rep.energy_ok = finite && rep.max_energy_drift <= energy_tolerance;
  // The envelope is an equality at t_start; allow rounding there.
  rep.mass_ok = finite && rep.mass_margin >= -1e-12 * std::max(1.0, norm0);
  return rep;
}

GeometricEnergyRecord geometric_energy(const SpatialGrid& grid, std::span<const double> c,
                                       std::span<const double> tau, double t, double c0) {
  const std::size_t n = grid.size();
  if (c.size() != n || tau.size() != n)
    throw std::invalid_argument("geometric_energy: samples do not match the grid");
  if (!(t > 0.0)) throw std::invalid_argument("geometric_energy: t must be positive");

  Fft fft(n);
  std::vector<cplx> in(n), spec(n), cx(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = c[j];
  fft.forward(in, spec);
  const auto xi = grid.frequencies();
  for (std::size_t k = 0; k < n; ++k) spec[k] *= cplx{0.0, xi[k]};
  // The Nyquist mode has no real derivative.
  spec[n / 2] = 0.0;
  fft.inverse(spec, cx);

  GeometricEnergyRecord rec;
  rec.t = t;
  const double h = grid.weight();
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.node(j);
    const double shear = x / (2.0 * t) - tau[j];
    rec.shape_integral += (cx[j].real() * cx[j].real() + c[j] * c[j] * shear * shear) * h;
    const double amp = t * c[j] * c[j] - c0 * c0;
    rec.amplitude_integral += amp * amp * h;
  }
  rec.value = t * t / (4.0 * std::numbers::sqrt2) * rec.shape_integral +
              rec.amplitude_integral / (16.0 * std::numbers::sqrt2);
  return rec;
}

namespace {

// ||x+y|^r - |y|^r| evaluated through |y|^r·expm1(r·log1p(δ)),
// δ = |x+y|/|y| - 1 written without cancellation.
double power_difference(cplx x, cplx y, double r) {
  if (y == cplx{0.0, 0.0}) throw std::invalid_argument("lemma ratio: y must be nonzero");
  if (!(r >= 0.0)) throw std::invalid_argument("lemma ratio: r must be nonnegative");
  const double ay = std::abs(y);
  const double axy = std::abs(x + y);
  const double delta = (std::norm(x) + 2.0 * (x * std::conj(y)).real()) / (ay * (axy + ay));
  return std::pow(ay, r) * std::abs(std::expm1(r * std::log1p(delta)));
}

}  // namespace

double lemma_bound_ratio(cplx x, cplx y, double r) {
  const double num = power_difference(x, y, r);
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  return num / (std::pow(std::abs(y), r - 1.0) * ax + std::pow(ax, r));
}

double lemma_restricted_ratio(cplx x, cplx y, double r) {
  const double num = power_difference(x, y, r);
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  return num / (std::pow(std::abs(y), r - 1.0) * ax);
}

LemmaHarnessReport lemma_harness(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mod(std::log(1e-6), std::log(1e6));
  std::uniform_real_distribution<double> arg(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> power(0.0, 4.0);
  LemmaHarnessReport rep;
  rep.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const cplx x = std::polar(std::exp(log_mod(rng)), arg(rng));
    const cplx y = std::polar(std::exp(log_mod(rng)), arg(rng));
    const double r = power(rng);
    rep.max_ratio = std::max(rep.max_ratio, lemma_bound_ratio(x, y, r));
    if (r <= 1.0 || std::abs(x) <= 0.25 * std::abs(y)) {
      ++rep.restricted_samples;
      rep.max_restricted_ratio = std::max(rep.max_restricted_ratio, lemma_restricted_ratio(x, y, r));
    }
  }
  return rep;
}

}  // namespace dnls
