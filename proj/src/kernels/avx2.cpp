// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only reached after a
// runtime CPU check in dispatch.cpp.

#include "dnls/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace dnls::kernels {
namespace {

// Largest |x| handled by the vector sincos; beyond it the three-part
// reduction constant loses exactness and lanes fall back to libm.
constexpr double kSincosLimit = 1.0e5;

// pi/2 split into 33-bit pieces (fdlibm's pio2_1/pio2_2/pio2_3).
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050630396597660e-11;
constexpr double kPio2Lo = 2.02226624871116645580e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// Cephes minimax coefficients on [-pi/4, pi/4].
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8,
                            2.75573136213857245213e-6,  -1.98412698295895385996e-4,
                            8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9,
                            -2.75573141792967388112e-7,  2.48015872888517045348e-5,
                            -1.38888888888730564116e-3,  4.16666666666665929218e-2};

inline __m256d horner(__m256d z, const double (&c)[6]) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 6; ++k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
  return p;
}

inline void sincos_pd(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d ax = _mm256_and_pd(x, abs_mask);
  if (_mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kSincosLimit), _CMP_GT_OQ)) != 0) {
    alignas(32) double xs[4], ss[4], cs[4];
    _mm256_store_pd(xs, x);
    for (int k = 0; k < 4; ++k) {
      ss[k] = std::sin(xs[k]);
      cs[k] = std::cos(xs[k]);
    }
    s_out = _mm256_load_pd(ss);
    c_out = _mm256_load_pd(cs);
    return;
  }

  const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), horner(z, kSin), r);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d cos_r = _mm256_fmadd_pd(_mm256_mul_pd(z, z), horner(z, kCos),
                                        _mm256_fnmadd_pd(half, z, _mm256_set1_pd(1.0)));

  // Quadrant q = j mod 4: (sin, cos) = (s, c), (c, -s), (-s, -c), (-c, s).
  const __m128i q32 = _mm256_cvtpd_epi32(j);
  const __m256i q = _mm256_cvtepi32_epi64(q32);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap =
      _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d sin_base = _mm256_blendv_pd(sin_r, cos_r, swap);
  const __m256d cos_base = _mm256_blendv_pd(cos_r, sin_r, swap);
  const __m256i sin_neg = _mm256_slli_epi64(_mm256_and_si256(q, two), 62);
  const __m256i cos_neg =
      _mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62);
  s_out = _mm256_xor_pd(sin_base, _mm256_castsi256_pd(sin_neg));
  c_out = _mm256_xor_pd(cos_base, _mm256_castsi256_pd(cos_neg));
}

// Deinterleaves 4 complex values into (re, im) vectors in lane order
// [0, 2, 1, 3]; per-node real arrays are loaded with the same permutation.
inline void load4(const cplx* p, __m256d& re, __m256d& im) {
  const __m256d v0 = _mm256_loadu_pd(reinterpret_cast<const double*>(p));
  const __m256d v1 = _mm256_loadu_pd(reinterpret_cast<const double*>(p) + 4);
  re = _mm256_unpacklo_pd(v0, v1);
  im = _mm256_unpackhi_pd(v0, v1);
}

inline void store4(cplx* p, __m256d re, __m256d im) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), _mm256_unpacklo_pd(re, im));
  _mm256_storeu_pd(reinterpret_cast<double*>(p) + 4, _mm256_unpackhi_pd(re, im));
}

inline __m256d load_real4(const double* p) {
  return _mm256_permute4x64_pd(_mm256_loadu_pd(p), 0xD8);
}

inline void store_real4(double* p, __m256d v) {
  _mm256_storeu_pd(p, _mm256_permute4x64_pd(v, 0xD8));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void multiply(cplx* data, const cplx* factors, std::size_t n) {
  std::size_t j = 0;
  double* d = reinterpret_cast<double*>(data);
  const double* f = reinterpret_cast<const double*>(factors);
  for (; j + 2 <= n; j += 2) {
    const __m256d a = _mm256_loadu_pd(d + 2 * j);
    const __m256d b = _mm256_loadu_pd(f + 2 * j);
    const __m256d t1 = _mm256_mul_pd(a, _mm256_movedup_pd(b));
    const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(a, 0x5), _mm256_permute_pd(b, 0xF));
    _mm256_storeu_pd(d + 2 * j, _mm256_addsub_pd(t1, t2));
  }
  scalar_table().multiply(data + j, factors + j, n - j);
}

void phase_factors(cplx* out, const double* weights, double coef, std::size_t n) {
  std::size_t j = 0;
  const __m256d c = _mm256_set1_pd(coef);
  for (; j + 4 <= n; j += 4) {
    __m256d s, co;
    sincos_pd(_mm256_mul_pd(c, load_real4(weights + j)), s, co);
    store4(out + j, co, s);
  }
  scalar_table().phase_factors(out + j, weights + j, coef, n - j);
}

inline void rotate4(cplx* psi, const cplx* background, __m256d theta) {
  __m256d s, c;
  sincos_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), theta), s, c);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d em1 = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(-2.0), s), s);
  const __m256d sin_t = _mm256_mul_pd(_mm256_mul_pd(two, s), c);
  const __m256d cos_t = _mm256_add_pd(_mm256_set1_pd(1.0), em1);
  __m256d pr, pi, br, bi;
  load4(psi, pr, pi);
  load4(background, br, bi);
  const __m256d re = _mm256_add_pd(_mm256_fmsub_pd(pr, cos_t, _mm256_mul_pd(pi, sin_t)),
                                   _mm256_fmsub_pd(br, em1, _mm256_mul_pd(bi, sin_t)));
  const __m256d im = _mm256_add_pd(_mm256_fmadd_pd(pi, cos_t, _mm256_mul_pd(pr, sin_t)),
                                   _mm256_fmadd_pd(bi, em1, _mm256_mul_pd(br, sin_t)));
  store4(psi, re, im);
}

void rotate(cplx* psi, const cplx* background, const double* theta, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) rotate4(psi + j, background + j, load_real4(theta + j));
  scalar_table().rotate(psi + j, background + j, theta + j, n - j);
}

inline __m256d shifted_q(const cplx* psi, const cplx* background) {
  __m256d pr, pi, br, bi;
  load4(psi, pr, pi);
  load4(background, br, bi);
  const __m256d wr = _mm256_add_pd(pr, br), wi = _mm256_add_pd(pi, bi);
  const __m256d w2 = _mm256_fmadd_pd(wr, wr, _mm256_mul_pd(wi, wi));
  const __m256d b2 = _mm256_fmadd_pd(br, br, _mm256_mul_pd(bi, bi));
  return _mm256_sub_pd(w2, b2);
}

void cubic_phase(cplx* psi, const cplx* background, double coef, std::size_t n) {
  std::size_t j = 0;
  const __m256d c = _mm256_set1_pd(coef);
  for (; j + 4 <= n; j += 4)
    rotate4(psi + j, background + j, _mm256_mul_pd(c, shifted_q(psi + j, background + j)));
  scalar_table().cubic_phase(psi + j, background + j, coef, n - j);
}

void abs2_shifted(double* out, const cplx* psi, const cplx* background, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d pr, pi, br, bi;
    load4(psi + j, pr, pi);
    load4(background + j, br, bi);
    const __m256d wr = _mm256_add_pd(pr, br), wi = _mm256_add_pd(pi, bi);
    store_real4(out + j, _mm256_fmadd_pd(wr, wr, _mm256_mul_pd(wi, wi)));
  }
  scalar_table().abs2_shifted(out + j, psi + j, background + j, n - j);
}

double sum_abs2(const cplx* psi, std::size_t n) {
  std::size_t j = 0;
  const double* p = reinterpret_cast<const double*>(psi);
  __m256d acc = _mm256_setzero_pd();
  for (; j + 2 <= n; j += 2) {
    const __m256d v = _mm256_loadu_pd(p + 2 * j);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  return hsum(acc) + scalar_table().sum_abs2(psi + j, n - j);
}

double sum_weighted_abs2(const cplx* psi, const double* weights, std::size_t n) {
  std::size_t j = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; j + 4 <= n; j += 4) {
    __m256d re, im;
    load4(psi + j, re, im);
    const __m256d a2 = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    acc = _mm256_fmadd_pd(load_real4(weights + j), a2, acc);
  }
  return hsum(acc) + scalar_table().sum_weighted_abs2(psi + j, weights + j, n - j);
}

double sum_potential(const cplx* psi, const cplx* background, std::size_t n) {
  std::size_t j = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; j + 4 <= n; j += 4) {
    const __m256d q = shifted_q(psi + j, background + j);
    acc = _mm256_fmadd_pd(q, q, acc);
  }
  return hsum(acc) + scalar_table().sum_potential(psi + j, background + j, n - j);
}

double sum_flux(const double* q, const cplx* psi, const cplx* background, std::size_t n) {
  std::size_t j = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; j + 4 <= n; j += 4) {
    __m256d pr, pi, br, bi;
    load4(psi + j, pr, pi);
    load4(background + j, br, bi);
    const __m256d im = _mm256_fmsub_pd(bi, pr, _mm256_mul_pd(br, pi));
    acc = _mm256_fmadd_pd(load_real4(q + j), im, acc);
  }
  return hsum(acc) + scalar_table().sum_flux(q + j, psi + j, background + j, n - j);
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2",       multiply,      phase_factors,
                                 rotate,       cubic_phase,   abs2_shifted,
                                 sum_abs2,     sum_weighted_abs2, sum_potential,
                                 sum_flux};
  return table;
}

}  // namespace dnls::kernels
