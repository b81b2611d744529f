// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "symcap/kernels.hpp"

namespace symcap::kernels {

namespace {

bool detect_avx2() {
#if defined(SYMCAP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  // SYMCAP_ISA=scalar pins the reference kernels.
  if (const char* env = std::getenv("SYMCAP_ISA"); env && std::string(env) == "scalar") {
    return Isa::scalar;
  }
  return detect_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
  static const bool ok = detect_avx2();
  return ok;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool select_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

void caxpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
#if defined(SYMCAP_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::caxpy(a, x, y);
#endif
  scalar::caxpy(a, x, y);
}

void caxpy2(cplx a0, cplx a1, std::span<const cplx> x, std::span<cplx> y0, std::span<cplx> y1) {
#if defined(SYMCAP_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::caxpy2(a0, a1, x, y0, y1);
#endif
  scalar::caxpy2(a0, a1, x, y0, y1);
}

cplx cdotc(std::span<const cplx> x, std::span<const cplx> y) {
#if defined(SYMCAP_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::cdotc(x, y);
#endif
  return scalar::cdotc(x, y);
}

}  // namespace symcap::kernels
