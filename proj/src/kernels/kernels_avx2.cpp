// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and must only be entered after a CPUID check (see dispatch.cpp).

#include <immintrin.h>

#include "tripod/kernels.hpp"

namespace tripod::kernels::detail {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_swap = _mm256_permute_pd(b, 0x5);
  return _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
}

inline __m256d broadcast(cplx z) { return _mm256_setr_pd(z.real(), z.imag(), z.real(), z.imag()); }

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

inline cplx fold(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  alignas(16) double out[2];
  _mm_store_pd(out, _mm_add_pd(lo, hi));
  return {out[0], out[1]};
}

}  // namespace

void csr_matvec_acc_avx2(const CsrView& a, cplx alpha, const cplx* x, cplx* y) {
  const double* xr = raw(x);
  const double* vr = raw(a.values);
  for (std::size_t i = 0; i < a.rows; ++i) {
    int k = a.row_ptr[i];
    const int end = a.row_ptr[i + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 1 < end; k += 2) {
      const __m256d v = _mm256_loadu_pd(vr + 2 * k);
      const __m128d x0 = _mm_loadu_pd(xr + 2 * a.cols[k]);
      const __m128d x1 = _mm_loadu_pd(xr + 2 * a.cols[k + 1]);
      const __m256d xv = _mm256_insertf128_pd(_mm256_castpd128_pd256(x0), x1, 1);
      acc = _mm256_add_pd(acc, cmul(v, xv));
    }
    cplx sum = fold(acc);
    if (k < end) sum += a.values[k] * x[a.cols[k]];
    y[i] += alpha * sum;
  }
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d av = broadcast(alpha);
  const double* xr = raw(x);
  double* yr = raw(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xr + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yr + 2 * i);
    _mm256_storeu_pd(yr + 2 * i, _mm256_add_pd(yv, cmul(av, xv)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(std::size_t n, cplx alpha, cplx* x) {
  const __m256d av = broadcast(alpha);
  double* xr = raw(x);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(xr + 2 * i, cmul(av, _mm256_loadu_pd(xr + 2 * i)));
  }
  for (; i < n; ++i) x[i] *= alpha;
}

double norm_sq_avx2(std::size_t n, const cplx* x) {
  const double* xr = raw(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xr + 2 * i);
    const __m256d b = _mm256_loadu_pd(xr + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d a = _mm256_loadu_pd(xr + 2 * i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  const cplx folded = fold(_mm256_add_pd(acc0, acc1));
  double s = folded.real() + folded.imag();
  for (; i < n; ++i) s += std::norm(x[i]);
  return s;
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xr = raw(x);
  const double* yr = raw(y);
  // direct: [xr*yr, xi*yi], cross: [xr*yi, xi*yr]
  __m256d direct = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xr + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yr + 2 * i);
    direct = _mm256_fmadd_pd(xv, yv, direct);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0x5), cross);
  }
  const cplx d = fold(direct);
  const cplx c = fold(cross);
  cplx s{d.real() + d.imag(), c.real() - c.imag()};
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

}  // namespace tripod::kernels::detail
