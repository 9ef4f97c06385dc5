#include "dnls/kernels.hpp"

#include <cmath>

namespace dnls::kernels {
namespace {

void multiply(cplx* data, const cplx* factors, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double ar = data[j].real(), ai = data[j].imag();
    const double br = factors[j].real(), bi = factors[j].imag();
    data[j] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

void phase_factors(cplx* out, const double* weights, double coef, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double x = coef * weights[j];
    out[j] = {std::cos(x), std::sin(x)};
  }
}

inline void rotate_one(cplx& psi, cplx b, double theta) {
  const double h = 0.5 * theta;
  const double s = std::sin(h), c = std::cos(h);
  const double em1_re = -2.0 * s * s;  // cos(theta) - 1
  const double sin_t = 2.0 * s * c;
  const double cos_t = 1.0 + em1_re;
  const double pr = psi.real(), pi = psi.imag();
  const double re = (pr * cos_t - pi * sin_t) + (b.real() * em1_re - b.imag() * sin_t);
  const double im = (pi * cos_t + pr * sin_t) + (b.imag() * em1_re + b.real() * sin_t);
  psi = {re, im};
}

void rotate(cplx* psi, const cplx* background, const double* theta, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) rotate_one(psi[j], background[j], theta[j]);
}

void cubic_phase(cplx* psi, const cplx* background, double coef, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const cplx b = background[j];
    const double wr = psi[j].real() + b.real(), wi = psi[j].imag() + b.imag();
    const double q = (wr * wr + wi * wi) - (b.real() * b.real() + b.imag() * b.imag());
    rotate_one(psi[j], b, coef * q);
  }
}

void abs2_shifted(double* out, const cplx* psi, const cplx* background, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const double wr = psi[j].real() + background[j].real();
    const double wi = psi[j].imag() + background[j].imag();
    out[j] = wr * wr + wi * wi;
  }
}

double sum_abs2(const cplx* psi, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    acc += psi[j].real() * psi[j].real() + psi[j].imag() * psi[j].imag();
  return acc;
}

double sum_weighted_abs2(const cplx* psi, const double* weights, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    acc += weights[j] * (psi[j].real() * psi[j].real() + psi[j].imag() * psi[j].imag());
  return acc;
}

double sum_potential(const cplx* psi, const cplx* background, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx b = background[j];
    const double wr = psi[j].real() + b.real(), wi = psi[j].imag() + b.imag();
    const double q = (wr * wr + wi * wi) - (b.real() * b.real() + b.imag() * b.imag());
    acc += q * q;
  }
  return acc;
}

double sum_flux(const double* q, const cplx* psi, const cplx* background, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // Im(b * conj(psi)) = b_i psi_r - b_r psi_i
    acc += q[j] * (background[j].imag() * psi[j].real() - background[j].real() * psi[j].imag());
  }
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",     multiply,      phase_factors,
                                 rotate,       cubic_phase,   abs2_shifted,
                                 sum_abs2,     sum_weighted_abs2, sum_potential,
                                 sum_flux};
  return table;
}

}  // namespace dnls::kernels
