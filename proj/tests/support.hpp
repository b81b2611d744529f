// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared generators and dense reference helpers for the test binaries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "symcap/channel.hpp"
#include "symcap/coherent_info.hpp"
#include "symcap/rep_core.hpp"

namespace symcap::test {

using cplx = std::complex<double>;

inline std::mt19937_64 rng_for(std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{a, b, std::uint64_t{0x5eed}};
  return std::mt19937_64(seq);
}

inline cplx gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline ComplexMatrix2 random_matrix2(std::mt19937_64& rng) {
  ComplexMatrix2 m;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m(i, j) = gaussian_complex(rng);
  }
  return m;
}

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian_complex(rng);
  }
  return m;
}

/// Random density matrix of the given rank.
inline Eigen::MatrixXcd random_density(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index rank) {
  const Eigen::MatrixXcd g = random_matrix(rng, dim, rank);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline FamilyKind random_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  return static_cast<FamilyKind>(pick(rng));
}

inline double random_p(std::mt19937_64& rng, FamilyKind f) {
  std::uniform_real_distribution<double> u(0.0, std::min(0.3, family_p_max(f)));
  return u(rng);
}

/// Random permutation-invariant input, sometimes with sparse or real rows so
/// the degenerate branches get exercised.
inline SymmetricInput random_input(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> style(0, 3);
  const int s = style(rng);
  if (s == 0) return random_symmetric_input(n, rng);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, n + 1);
  std::uniform_int_distribution<int> pick(0, n);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k <= n; ++k) {
      if (s == 1 && pick(rng) > 1) continue;  // sparse
      cplx z = gaussian_complex(rng);
      if (s == 2) z = z.real();  // real
      a(i, k) = z;
    }
    if (a.row(i).norm() == 0.0) a(i, pick(rng)) = 1.0;
  }
  if (s == 3) a.row(1) = a.row(0);  // rank one
  return SymmetricInput::normalized(std::move(a));
}

/// Kronecker product.
inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

inline Eigen::MatrixXcd kron_power(const Eigen::MatrixXcd& a, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, a);
  return out;
}

/// Dicke state |D^n_k> in the computational basis (qubit 0 is the MSB).
inline Eigen::VectorXcd dicke_vector(int n, int k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  double count = 0.0;
  for (Eigen::Index x = 0; x < v.size(); ++x) {
    if (__builtin_popcountll(static_cast<unsigned long long>(x)) == k) {
      v(x) = 1.0;
      count += 1.0;
    }
  }
  return v / std::sqrt(count);
}

/// All permutations of 0..n-1 in lexicographic order.
inline std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Cycle type of a permutation, sorted descending.
inline std::vector<int> cycle_type(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<int> out;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace symcap::test
