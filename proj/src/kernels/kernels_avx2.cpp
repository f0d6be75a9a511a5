// Compiled with -mavx2 -mfma. Only reached through avx2_kernels() after the
// runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "qmetro/kernels.hpp"

namespace qmetro::kernels {
namespace {

// Two complex doubles per 256-bit register, interleaved [re, im, re, im].

void zaxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), prod));
  }
  for (; i < n; ++i) {
    y[i] += a * x[i];
  }
}

cplx zdotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<const double*>(y);
  __m256d direct = _mm256_setzero_pd();   // [xr*yr, xi*yi, ...]
  __m256d crossed = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    direct = _mm256_fmadd_pd(xv, yv, direct);
    crossed = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), crossed);
  }
  alignas(32) double d[4];
  alignas(32) double c[4];
  _mm256_store_pd(d, direct);
  _mm256_store_pd(c, crossed);
  double re = (d[0] + d[2]) + (d[1] + d[3]);
  double im = (c[0] + c[2]) - (c[1] + c[3]);
  for (; i < n; ++i) {
    const cplx v = std::conj(x[i]) * y[i];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

double dznrm2sq_avx2(std::size_t n, const cplx* x) {
  auto* xd = reinterpret_cast<const double*>(x);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d v = _mm256_loadu_pd(xd + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double a[4];
  _mm256_store_pd(a, acc);
  double total = (a[0] + a[2]) + (a[1] + a[3]);
  for (; i < m; ++i) {
    total += xd[i] * xd[i];
  }
  return total;
}

void drot_avx2(std::size_t n, double c, double s, double* x, double* y) {
  const __m256d cv = _mm256_set1_pd(c);
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmsub_pd(cv, xv, _mm256_mul_pd(sv, yv)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, xv, _mm256_mul_pd(cv, yv)));
  }
  for (; i < n; ++i) {
    const double xv = x[i];
    const double yv = y[i];
    x[i] = c * xv - s * yv;
    y[i] = s * xv + c * yv;
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", zaxpy_avx2, zdotc_avx2, dznrm2sq_avx2,
                                 drot_avx2};
  return table;
}

}  // namespace qmetro::kernels
