// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>

#include "symcap/rep_core.hpp"

namespace symcap {

namespace {

template <class Real>
struct IrrepTables {
  std::array<std::array<Real, kMaxIrrepN + 1>, kMaxIrrepN + 1> binom{};
  std::array<Real, kMaxIrrepN + 1> log_factorial{};
  IrrepTables() {
    for (int n = 0; n <= kMaxIrrepN; ++n) {
      log_factorial[static_cast<std::size_t>(n)] = std::lgamma(static_cast<Real>(n) + 1);
      for (int k = 0; k <= n; ++k) {
        binom[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] = static_cast<Real>(binomial(n, k));
      }
    }
  }
};

template <class Real>
const IrrepTables<Real>& tables() {
  static const IrrepTables<Real> t;
  return t;
}

template <class Real>
void fill_powers(std::complex<Real> z, int count, std::array<std::complex<Real>, kMaxIrrepN + 1>& out) {
  out[0] = {1, 0};
  for (int e = 1; e <= count; ++e) out[static_cast<std::size_t>(e)] = out[static_cast<std::size_t>(e - 1)] * z;
}

}  // namespace

template <class Real>
void irrep_q2_into(const Matrix2<Real>& m, const Partition& lambda, std::complex<Real>* out) {
  using C = std::complex<Real>;
  if (lambda.d() != 2 && lambda.rows() > 2) throw DomainError("irrep_q2: lambda must have at most 2 rows");
  if (lambda.n() > kMaxIrrepN) throw DomainError("irrep_q2: n exceeds supported range");
  const int l = lambda.l();
  const int lambda2 = lambda[1];
  const auto& t = tables<Real>();

  std::array<C, kMaxIrrepN + 1> p11, p12, p21, p22;
  fill_powers(m(0, 0), l, p11);
  fill_powers(m(0, 1), l, p12);
  fill_powers(m(1, 0), l, p21);
  fill_powers(m(1, 1), l, p22);

  // det^0 = 1 even for singular M.
  C det_pow{1, 0};
  const C det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  for (int e = 0; e < lambda2; ++e) det_pow *= det;

  const std::size_t dim = static_cast<std::size_t>(l) + 1;
  for (int i = 0; i <= l; ++i) {
    for (int j = 0; j <= l; ++j) {
      C sum{0, 0};
      const int k_lo = std::max(0, i + j - l);
      const int k_hi = std::min(i, j);
      for (int k = k_lo; k <= k_hi; ++k) {
        const Real coeff = t.binom[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] *
                           t.binom[static_cast<std::size_t>(l - j)][static_cast<std::size_t>(i - k)];
        sum += coeff * (p11[static_cast<std::size_t>(k)] * p12[static_cast<std::size_t>(j - k)]) *
               (p21[static_cast<std::size_t>(i - k)] * p22[static_cast<std::size_t>(l - i - j + k)]);
      }
      const Real log_ratio = t.log_factorial[static_cast<std::size_t>(i)] +
                             t.log_factorial[static_cast<std::size_t>(l - i)] -
                             t.log_factorial[static_cast<std::size_t>(j)] -
                             t.log_factorial[static_cast<std::size_t>(l - j)];
      const Real scale = std::exp(log_ratio / 2);
      const std::size_t r = static_cast<std::size_t>(l - i);
      const std::size_t c = static_cast<std::size_t>(l - j);
      // The sum is the (c, r) entry in the Dicke-weight ordering.
      out[c * dim + r] = det_pow * (scale * sum);
    }
  }
}

template <class Real>
IrrepBlockT<Real> irrep_q2(const Matrix2<Real>& m, const Partition& lambda) {
  const int dim = lambda.l() + 1;
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> buf(dim, dim);
  irrep_q2_into<Real>(m, lambda, buf.data());
  return {lambda, MatrixX<Real>(buf)};
}

template void irrep_q2_into<double>(const Matrix2<double>&, const Partition&, std::complex<double>*);
template void irrep_q2_into<long double>(const Matrix2<long double>&, const Partition&, std::complex<long double>*);
template IrrepBlockT<double> irrep_q2<double>(const Matrix2<double>&, const Partition&);
template IrrepBlockT<long double> irrep_q2<long double>(const Matrix2<long double>&, const Partition&);

}  // namespace symcap
