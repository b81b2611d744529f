// SPDX-License-Identifier: Apache-2.0
#pragma once

// Integer partitions, Specht/Weyl module dimensions and the GL(2) irrep
// matrices q^2_lambda(M).

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symcap {

/// Raised for invalid arguments to the combinatorial routines (n <= 0,
/// malformed partitions, out-of-range indices).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Largest n supported by the exact binomial table and irrep evaluation.
inline constexpr int kMaxIrrepN = 64;

/// A partition of n into at most d parts, 1 <= d <= 4 (in practice 2 or 4).
/// Stored padded with zeros to exactly d entries, non-increasing.
class Partition {
 public:
  Partition() = default;

  /// Validates and pads `parts` to `d` entries. Throws DomainError when the
  /// parts are negative, increasing, or more than d are non-zero.
  static Partition make(const std::vector<int>& parts, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  int operator[](int i) const { return parts_[static_cast<std::size_t>(i)]; }
  std::vector<int> parts() const { return {parts_.begin(), parts_.begin() + d_}; }

  /// Number of non-zero rows.
  int rows() const;

  /// l = lambda_1 - lambda_2; the GL(2) irrep has dimension l + 1.
  int l() const { return parts_[0] - parts_[1]; }

  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  /// Lexicographic on the padded parts.
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.parts_ <=> b.parts_; }

 private:
  std::array<int, 4> parts_{};
  int d_ = 0;
  int n_ = 0;
};

/// All partitions of n with at most d parts, lexicographically descending.
std::vector<Partition> enumerate_partitions(int n, int d);

/// Exact binomial coefficient from a Pascal table, 0 <= k <= n <= kMaxIrrepN.
std::uint64_t binomial(int n, int k);

/// Hook-length formula, exact. Throws std::overflow_error if the value does
/// not fit in 64 bits.
std::uint64_t specht_dim(const Partition& lambda);

/// Hook-length formula in floating point (log domain); usable for any n.
double specht_dim_real(const Partition& lambda);

/// Weyl dimension formula for GL(d), d >= number of parts of lambda.
std::uint64_t weyl_dim(const Partition& lambda, int d);

template <class Real>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;
using ComplexMatrix2 = Matrix2<double>;

template <class Real>
using MatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// q^2_lambda(M) as an (l+1) x (l+1) matrix.
///
/// Row/column position r corresponds to the Gelfand-Tsetlin index i = l - r,
/// i.e. indices run from l down to 0. For lambda = (n, 0) position r is the
/// Dicke state of Hamming weight r.
template <class Real>
struct IrrepBlockT {
  Partition lambda;
  MatrixX<Real> matrix;
};
using IrrepBlock = IrrepBlockT<double>;

template <class Real>
IrrepBlockT<Real> irrep_q2(const Matrix2<Real>& m, const Partition& lambda);

/// Writes q^2_lambda(M) into `out` (row-major, (l+1)^2 entries) without
/// allocating. Hot path of the precomputation.
template <class Real>
void irrep_q2_into(const Matrix2<Real>& m, const Partition& lambda, std::complex<Real>* out);

}  // namespace symcap
