// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense reference implementation on 2^(n+1)-dimensional states. Slow and
// simple; the fast block evaluator is checked against it.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symcap/channel.hpp"
#include "symcap/coherent_info.hpp"

namespace symcap {

class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kOracleMaxN = 10;
inline constexpr int kComplementaryMaxN = 6;
inline constexpr int kOracleSuiteMaxN = 8;
/// Eigenvalues above this fraction of the largest one count toward rank.
inline constexpr double kRankThreshold = 1e-10;

/// Reference qubit is the most significant bit; channel qubit q is bit q.
struct DenseState {
  int n = 0;
  Eigen::VectorXcd purification;  // length 2^(n+1)
};

DenseState build_purification(const SymmetricInput& input);

/// Applies the channel to the listed qubits (bit positions) of a
/// 2^num_qubits density matrix, one single-qubit superoperator at a time.
Eigen::MatrixXcd apply_channel_qubitwise(const PauliChannel& channel, const Eigen::MatrixXcd& rho,
                                         const std::vector<int>& qubits);

/// Von Neumann entropy in bits with negative eigenvalues clipped to zero.
double dense_entropy_bits(const Eigen::MatrixXcd& rho);

/// Number of eigenvalues above kRankThreshold times the largest.
int numeric_rank(const Eigen::MatrixXcd& psd);

/// S(N^n(rho_A)) - S((I (x) N^n)(|psi><psi|)).
double brute_ci(const SymmetricInput& input, const PauliChannel& channel);

/// rho_A = tr_R |psi><psi|, on n qubits.
Eigen::MatrixXcd channel_input(const SymmetricInput& input);

/// Environment state E[k1, k2] = tr(A_k1 rho A_k2^H) over Kraus strings with
/// non-zero weight (dimension 4^n, 3^n for two-Pauli channels, 1 for the
/// identity). Rows/columns enumerate strings with qubit 0 fastest.
Eigen::MatrixXcd complementary_output(const Eigen::MatrixXcd& rho, const PauliChannel& channel);

/// Matrix with the same non-zero spectrum as complementary_output, of
/// dimension rank(rho) * 2^n: G[(r,x),(s,y)] = sqrt(mu_r mu_s) <y|N(|v_s><v_r|)|x>.
Eigen::MatrixXcd complementary_gram(const Eigen::MatrixXcd& rho, const PauliChannel& channel);

/// S(N^n(rho_A)) - S(E) using the environment state.
double brute_ci_via_environment(const SymmetricInput& input, const PauliChannel& channel);

// Cross-validation of evaluate_ci against brute_ci.

using CiEvaluator = std::function<double(const SymmetricInput&, const Precomputation&)>;

struct OracleSuiteConfig {
  int n_min = 1;
  int n_max = kOracleSuiteMaxN;
  int cases_per_n = 200;
  std::vector<FamilyKind> families{FamilyKind::depolarizing, FamilyKind::independent_xz, FamilyKind::two_pauli};
  std::vector<double> p_values{0.01, 0.05, 0.1, 0.15, 0.2};
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
  int threads = 1;
};

struct OracleSuiteResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  double max_diff = 0.0;
  std::string worst;  // description of the case with the largest difference
  bool passed() const { return cases > 0 && failures == 0; }
};

/// Runs the suite; p values outside a family's range are skipped. Throws
/// SizeError when n_max exceeds kOracleSuiteMaxN. `fast` defaults to
/// evaluate_ci<double>.
OracleSuiteResult run_oracle_suite(const OracleSuiteConfig& config, const CiEvaluator& fast = {});

}  // namespace symcap
