#pragma once
// Data-parallel inner loops of the split-step integrator and the discrete
// functionals. Every kernel has a scalar reference implementation; SIMD
// variants are selected once at runtime and must agree with the reference
// to a few ulp (see tests/test_kernels.cpp).

#include <complex>
#include <cstddef>
#include <string_view>

namespace dnls::kernels {

using cplx = std::complex<double>;

/// Function table for one instruction-set variant. All pointers are
/// non-null; arrays never alias unless stated.
struct KernelTable {
  const char* name;

  /// data[j] *= factors[j]
  void (*multiply)(cplx* data, const cplx* factors, std::size_t n);

  /// out[j] = exp(i * coef * weights[j])
  void (*phase_factors)(cplx* out, const double* weights, double coef, std::size_t n);

  /// Rotates w = psi + b by exp(i theta) and stores w' - b back into psi,
  /// written as psi*e^{i theta} + b*(e^{i theta} - 1) so that psi = 0 is kept
  /// exactly when theta = 0.
  void (*rotate)(cplx* psi, const cplx* background, const double* theta, std::size_t n);

  /// Fused cubic case: theta_j = coef * (|psi_j + b_j|^2 - |b_j|^2), then rotate.
  void (*cubic_phase)(cplx* psi, const cplx* background, double coef, std::size_t n);

  /// out[j] = |psi_j + b_j|^2
  void (*abs2_shifted)(double* out, const cplx* psi, const cplx* background, std::size_t n);

  /// sum_j |psi_j|^2
  double (*sum_abs2)(const cplx* psi, std::size_t n);

  /// sum_j weights_j |psi_j|^2
  double (*sum_weighted_abs2)(const cplx* psi, const double* weights, std::size_t n);

  /// sum_j (|psi_j + b_j|^2 - |b_j|^2)^2
  double (*sum_potential)(const cplx* psi, const cplx* background, std::size_t n);

  /// sum_j q_j * Im(b_j * conj(psi_j))
  double (*sum_flux)(const double* q, const cplx* psi, const cplx* background, std::size_t n);
};

const KernelTable& scalar_table();

/// AVX2+FMA variant, or nullptr when it was not compiled in or the CPU lacks
/// the instructions.
const KernelTable* avx2_table();

/// The table used by the library. Chosen on first use: the best supported
/// variant, unless DNLS_KERNELS=scalar|avx2 is set in the environment.
const KernelTable& active();

/// Overrides the active table by name ("scalar" or "avx2"); returns false
/// when the variant is unavailable. Not thread-safe with concurrent solvers.
bool select(std::string_view name);

}  // namespace dnls::kernels
