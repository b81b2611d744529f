// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dicke basis of the symmetric subspace and its expansion in a tensor-power
// spanning set {|phi_j>^{(x)n}}.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace symcap {

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QubitState {
  std::complex<double> c0{1.0, 0.0};
  std::complex<double> c1{0.0, 0.0};

  /// Point (theta, phi) on the Bloch sphere.
  static QubitState from_bloch(double theta, double phi);
  /// Unit Bloch vector of the state.
  Eigen::Vector3d bloch() const;
};

/// <D^n_k | phi^{(x)n}> = sqrt(C(n,k)) c0^{n-k} c1^k.
std::complex<double> dicke_overlap(int n, int k, const QubitState& phi);

struct SpanningBasis {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<QubitState> states;
  /// overlap(k, j) = <D_k | phi_j^{(x)n}>
  Eigen::MatrixXcd overlap;
  /// |D_i> = sum_j beta(i, j) |phi_j>^{(x)n}
  Eigen::MatrixXcd beta;
  double condition_number = 0.0;
};

inline constexpr double kMaxConditionNumber = 1e8;
inline constexpr int kSpanningRetries = 8;

/// Builds a basis from explicit states (overlap, beta, condition number).
/// Throws BasisError when the states do not span the symmetric subspace.
SpanningBasis make_spanning_basis(int n, std::vector<QubitState> states, std::uint64_t seed = 0);

/// n+1 well-spread states: Fibonacci sphere under a seed-dependent rotation,
/// then a repulsion polish that lowers the largest pairwise overlap.
/// Retries with derived seeds when the condition number exceeds
/// kMaxConditionNumber.
SpanningBasis choose_spanning_states(int n, std::uint64_t seed);

/// Solves beta * overlap^T = I with a column-pivoted QR factorization.
Eigen::MatrixXcd expansion_coefficients(const SpanningBasis& basis);

/// 2-norm condition number of the overlap matrix.
double condition_number(const Eigen::MatrixXcd& overlap);

}  // namespace symcap
