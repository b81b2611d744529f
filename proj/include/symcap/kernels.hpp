// SPDX-License-Identifier: Apache-2.0
#pragma once

// Complex multiply-accumulate kernels used by the irrep-block contractions.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active variant is chosen once at startup from the CPU feature
// flags and can be overridden (tests run both and compare).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace symcap::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the AVX2 variant was compiled in and the CPU supports AVX2+FMA.
bool avx2_available();

/// Currently selected variant.
Isa active_isa();

/// Force a variant. Requesting avx2 on a machine without it is a no-op that
/// returns false.
bool select_isa(Isa isa);

// y[i] += a * x[i]
void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y);

// y0[i] += a0 * x[i]; y1[i] += a1 * x[i]  (x read once)
void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1);

// sum_i conj(x[i]) * y[i]
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);

namespace scalar {
void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1);
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);
}  // namespace scalar

#if defined(SYMCAP_HAVE_AVX2)
namespace avx2 {
void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1);
cplx cdotc(std::span<const cplx> x, std::span<const cplx> y);
}  // namespace avx2
#endif

/// Generic fallbacks for non-double scalar types (extended precision mode).
template <class Real>
void caxpy_generic(std::complex<Real> a, std::span<const std::complex<Real>> x,
                   std::span<std::complex<Real>> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

template <class Real>
std::complex<Real> cdotc_generic(std::span<const std::complex<Real>> x,
                                 std::span<const std::complex<Real>> y) {
  std::complex<Real> acc{0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace symcap::kernels
