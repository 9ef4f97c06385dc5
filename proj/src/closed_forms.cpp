#include "dnls/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dnls/fft.hpp"

namespace dnls {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void require_positive_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error(std::string(what) + ": requires t > 0");
}

}  // namespace

bool SelfSimilarParams::critical() const {
  return std::abs(alpha * d - 2.0) <= kCriticalTolerance;
}

bool SelfSimilarParams::subcritical() const { return !critical() && alpha * d < 2.0; }

void SelfSimilarParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be finite and >= 0");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw std::invalid_argument("amplitude must be finite");
}

cplx it_power(double t, int d) {
  return std::polar(std::pow(t, 0.5 * d), 0.25 * std::numbers::pi * d);
}

cplx eval_fa(const SelfSimilarParams& p, double t, std::span<const double> x) {
  require_positive_time(t, "eval_fa");
  const double phase = norm2(x) / (4.0 * t);
  return p.a * std::polar(1.0, phase) / it_power(t, p.d);
}

double eval_phase_A(const SelfSimilarParams& p, double t) {
  require_positive_time(t, "eval_phase_A");
  const double amod = std::abs(p.a);
  if (p.critical()) return std::pow(amod, 2.0 / p.d) * std::log(t);
  const double e = 1.0 - 0.5 * p.alpha * p.d;
  return std::pow(amod, p.alpha) * std::pow(t, e) / e;
}

cplx eval_u_selfsim(const SelfSimilarParams& p, double t, std::span<const double> x) {
  const double A = eval_phase_A(p, t);
  return eval_fa(p, t, x) * std::polar(1.0, sign_value(p.sign) * A);
}

cplx galilean_transform(const FieldND& u, const GalileanBoost& boost, double t,
                        std::span<const double> x) {
  if (boost.nu.size() != x.size())
    throw std::invalid_argument("galilean_transform: boost dimension mismatch");
  std::vector<double> shifted(x.begin(), x.end());
  double nu2 = 0.0, nux = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!std::isfinite(boost.nu[k])) throw std::invalid_argument("galilean_transform: non-finite boost");
    shifted[k] -= 2.0 * boost.nu[k] * t;
    nu2 += boost.nu[k] * boost.nu[k];
    nux += boost.nu[k] * x[k];
  }
  return std::polar(1.0, -t * nu2 + nux) * u(t, shifted);
}

cplx conformal_transform(const FieldND& f, int d, double t, std::span<const double> x) {
  require_positive_time(t, "conformal_transform");
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v /= t;
  return std::polar(1.0, norm2(x) / (4.0 * t)) / it_power(t, d) * f(1.0 / t, y);
}

FieldND selfsim_field(const SelfSimilarParams& p) {
  return [p](double t, std::span<const double> x) { return eval_u_selfsim(p, t, x); };
}

TrigInterpolant::TrigInterpolant(const FieldState& state)
    : grid_(state.grid), time_(state.time), coefficients_(state.size()) {
  Fft fft(state.size());
  fft.forward(state.values, coefficients_);
  const double inv_n = 1.0 / static_cast<double>(state.size());
  for (auto& c : coefficients_) c *= inv_n;
}

cplx TrigInterpolant::operator()(double y) const {
  const double L = grid_.half_width();
  if (!(y >= -L - 1e-12 * L && y <= L + 1e-12 * L))
    throw std::out_of_range("interpolation point outside the sampled interval");
  const std::size_t n = grid_.size();
  const double shift = y + L;
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    if (k == n / 2) {
      // Nyquist mode split symmetrically so real data interpolates to real.
      acc += coefficients_[k] * std::cos(grid_.frequency(k) * shift);
    } else {
      acc += coefficients_[k] * std::polar(1.0, grid_.frequency(k) * shift);
    }
  }
  return acc;
}

cplx reconstruct_u(const TrigInterpolant& eps, const SelfSimilarParams& p, double t, double x) {
  require_positive_time(t, "reconstruct_u");
  if (p.d != 1) throw std::invalid_argument("reconstruct_u: one space dimension only");
  if (std::abs(eps.time() * t - 1.0) > 1e-9)
    throw std::invalid_argument("reconstruct_u: perturbation is not at conformal time 1/t");
  const double xs[1] = {x};
  const cplx base = eval_u_selfsim(p, t, xs);
  const cplx prefactor = std::polar(1.0, x * x / (4.0 * t) + sign_value(p.sign) * eval_phase_A(p, t)) /
                         it_power(t, 1);
  return base + prefactor * eps(x / t);
}

cplx reconstruct_u(const FieldState& eps, const SelfSimilarParams& p, double t, double x) {
  require_positive_time(t, "reconstruct_u");
  return reconstruct_u(TrigInterpolant(eps), p, t, x);
}

}  // namespace dnls
