// SPDX-License-Identifier: Apache-2.0
//
// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after dispatch.cpp has confirmed CPU support.

#include <immintrin.h>

#include "symcap/kernels.hpp"

namespace symcap::kernels::avx2 {

namespace {

// a * x for two packed complex values, a given as broadcast (re, im).
inline __m256d cmul(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xs = _mm256_permute_pd(x, 0b0101);  // (xi, xr, ...)
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xs));
}

}  // namespace

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
    __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
    y0 = _mm256_add_pd(y0, cmul(ar, ai, x0));
    y1 = _mm256_add_pd(y1, cmul(ar, ai, x1));
    _mm256_storeu_pd(yp + 2 * i, y0);
    _mm256_storeu_pd(yp + 2 * i + 4, y1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(y0, cmul(ar, ai, x0)));
  }
  if (i < n) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    yp[2 * i] += a.real() * xr - a.imag() * xi;
    yp[2 * i + 1] += a.real() * xi + a.imag() * xr;
  }
}

void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1) {
  const __m256d a0r = _mm256_set1_pd(a0.real());
  const __m256d a0i = _mm256_set1_pd(a0.imag());
  const __m256d a1r = _mm256_set1_pd(a1.real());
  const __m256d a1i = _mm256_set1_pd(a1.imag());
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* p0 = reinterpret_cast<double*>(y0.data());
  double* p1 = reinterpret_cast<double*>(y1.data());
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    _mm256_storeu_pd(p0 + 2 * i, _mm256_add_pd(_mm256_loadu_pd(p0 + 2 * i), cmul(a0r, a0i, xv)));
    _mm256_storeu_pd(p1 + 2 * i, _mm256_add_pd(_mm256_loadu_pd(p1 + 2 * i), cmul(a1r, a1i, xv)));
  }
  if (i < n) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    p0[2 * i] += a0.real() * xr - a0.imag() * xi;
    p0[2 * i + 1] += a0.real() * xi + a0.imag() * xr;
    p1[2 * i] += a1.real() * xr - a1.imag() * xi;
    p1[2 * i + 1] += a1.real() * xi + a1.imag() * xr;
  }
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  const double* yp = reinterpret_cast<const double*>(y.data());
  const std::size_t n = x.size();
  // re_acc lanes: (xr*yr, xi*yi); im_acc lanes: (xr*yi, xi*yr)
  __m256d re0 = _mm256_setzero_pd(), re1 = _mm256_setzero_pd();
  __m256d im0 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d x1 = _mm256_loadu_pd(xp + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    re1 = _mm256_fmadd_pd(x1, y1, re1);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
    im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), im1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = _mm256_loadu_pd(xp + 2 * i);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    re0 = _mm256_fmadd_pd(x0, y0, re0);
    im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), im0);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, _mm256_add_pd(re0, re1));
  _mm256_store_pd(m, _mm256_add_pd(im0, im1));
  double re = r[0] + r[1] + r[2] + r[3];
  double im = (m[0] - m[1]) + (m[2] - m[3]);
  if (i < n) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    const double yr = yp[2 * i], yi = yp[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

}  // namespace symcap::kernels::avx2
