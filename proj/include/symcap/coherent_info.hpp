// SPDX-License-Identifier: Apache-2.0
#pragma once

// Coherent information I_c(N^{(x)n}, rho) for rank-two inputs
//   rho = (|psi0><psi0| + |psi1><psi1|) / 2,   psi_i in Sym^n(C^2),
// evaluated block by block over the two-row Schur-Weyl decomposition.

#include <complex>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "symcap/basis.hpp"
#include "symcap/channel.hpp"
#include "symcap/rep_core.hpp"

namespace symcap {

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dicke coefficients of |psi0> (row 0) and |psi1> (row 1). Rows are unit
/// vectors; they need not be orthogonal.
struct SymmetricInput {
  int n = 0;
  Eigen::MatrixXcd alpha;  // 2 x (n+1)

  /// Checks shape and unit row norms (1e-10).
  static SymmetricInput make(Eigen::MatrixXcd alpha);
  /// Rescales each row to unit norm; throws on a zero row.
  static SymmetricInput normalized(Eigen::MatrixXcd alpha);
};

/// Rows drawn from a complex Gaussian and normalized.
SymmetricInput random_symmetric_input(int n, std::mt19937_64& rng);

/// Blocks whose weight c_lambda falls below this are dropped.
inline constexpr double kBlockCutoff = 1e-15;

template <class Real>
struct PrecomputationT {
  using Cplx = std::complex<Real>;

  struct Block {
    Partition lambda;
    int dim = 0;         // l + 1
    double specht = 0;   // dim S_lambda
    // Channel image of |D_k><D_l| restricted to V_lambda, for every (k, l):
    // block (k, l) starts at ((k * (n+1) + l) * dim * dim), row-major.
    std::vector<Cplx> nd;
    // q^2_lambda(N(|phi_a><phi_b|)) in the same layout; empty unless kept.
    std::vector<Cplx> q;

    std::span<const Cplx> nd_block(int n, int k, int l) const {
      const std::size_t sz = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
      return {nd.data() + (static_cast<std::size_t>(k) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(l)) * sz, sz};
    }
    std::span<const Cplx> q_block(int n, int a, int b) const {
      const std::size_t sz = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
      return {q.data() + (static_cast<std::size_t>(a) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(b)) * sz, sz};
    }
  };

  PauliChannel channel;
  int n = 0;
  SpanningBasis basis;
  std::vector<Block> blocks;  // enumerate_partitions(n, 2) order
};
using Precomputation = PrecomputationT<double>;
using PrecomputationExt = PrecomputationT<long double>;

struct PrecomputeOptions {
  bool keep_irrep_blocks = false;
  int threads = 1;
};

template <class Real>
PrecomputationT<Real> precompute(const PauliChannel& channel, int n, const SpanningBasis& basis,
                                 const PrecomputeOptions& options = {});

template <class Real>
struct BlockEntryT {
  Partition lambda;
  double specht = 0.0;
  Real c = 0;         // q_bar * dim S_lambda
  bool skipped = false;
  MatrixX<Real> sigma;  // (l+1) x (l+1), trace 1
  MatrixX<Real> omega;  // 2(l+1) x 2(l+1), trace 1; reference qubit is the outer index
};

template <class Real>
struct BlockDecompositionT {
  std::vector<BlockEntryT<Real>> entries;
};
using BlockDecomposition = BlockDecompositionT<double>;

template <class Real>
BlockDecompositionT<Real> block_decomposition(const SymmetricInput& input, const PrecomputationT<Real>& pre);

/// Euclidean projection onto the probability simplex (sort and threshold).
template <class Real>
std::vector<Real> project_to_simplex(std::vector<Real> v);

/// Von Neumann entropy in bits after projecting the spectrum onto the
/// simplex. Throws NumericError if the matrix is not Hermitian within 1e-9.
template <class Real>
Real entropy_bits(const MatrixX<Real>& m);

struct CiBlockReport {
  Partition lambda;
  double c = 0.0;
  double s_sigma = 0.0;
  double s_omega = 0.0;
  bool skipped = false;
};

struct CiReport {
  double total = 0.0;  // bits over n uses
  std::vector<CiBlockReport> blocks;
};

/// sum_lambda c_lambda (S(sigma_lambda) - S(omega_lambda)), total over n uses.
template <class Real>
double evaluate_ci(const SymmetricInput& input, const PrecomputationT<Real>& pre);

template <class Real>
CiReport evaluate_ci_report(const SymmetricInput& input, const PrecomputationT<Real>& pre);

/// CI value and its gradient with respect to the real and imaginary parts of
/// alpha: grad(i, k) = dCI/dRe(alpha_ik) + i dCI/dIm(alpha_ik), projected on
/// the tangent space of the unit-row constraint.
struct CiGradient {
  double value = 0.0;
  Eigen::MatrixXcd grad;
};

CiGradient evaluate_ci_gradient(const SymmetricInput& input, const Precomputation& pre);

/// Projects an unconstrained alpha-gradient onto the tangent space of the
/// unit-row sphere at `alpha`.
Eigen::MatrixXcd tangent_projection(const Eigen::MatrixXcd& alpha, const Eigen::MatrixXcd& grad);

}  // namespace symcap
