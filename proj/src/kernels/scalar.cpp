// SPDX-License-Identifier: Apache-2.0
#include "symcap/kernels.hpp"

namespace symcap::kernels::scalar {

// Real/imaginary parts are spelled out so the loops never go through the
// checked complex multiply of the runtime library.

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const double ar = a.real(), ai = a.imag();
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* yp = reinterpret_cast<double*>(y.data());
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    yp[2 * i] += ar * xr - ai * xi;
    yp[2 * i + 1] += ar * xi + ai * xr;
  }
}

void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1) {
  const double a0r = a0.real(), a0i = a0.imag();
  const double a1r = a1.real(), a1i = a1.imag();
  const double* xp = reinterpret_cast<const double*>(x.data());
  double* y0p = reinterpret_cast<double*>(y0.data());
  double* y1p = reinterpret_cast<double*>(y1.data());
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    y0p[2 * i] += a0r * xr - a0i * xi;
    y0p[2 * i + 1] += a0r * xi + a0i * xr;
    y1p[2 * i] += a1r * xr - a1i * xi;
    y1p[2 * i + 1] += a1r * xi + a1i * xr;
  }
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
  const double* xp = reinterpret_cast<const double*>(x.data());
  const double* yp = reinterpret_cast<const double*>(y.data());
  double re = 0.0, im = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xp[2 * i], xi = xp[2 * i + 1];
    const double yr = yp[2 * i], yi = yp[2 * i + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

}  // namespace symcap::kernels::scalar
