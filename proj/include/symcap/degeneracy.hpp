// SPDX-License-Identifier: Apache-2.0
#pragma once

// Schur polynomials, Kostka numbers and the Choi-spectrum measure of n copies
// of a Pauli channel; annihilation counting and typical-set statistics over
// Pauli weight classes.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "symcap/channel.hpp"
#include "symcap/coherent_info.hpp"
#include "symcap/rep_core.hpp"

namespace symcap {

/// Counts of I, X, Y, Z in a Pauli string.
struct WeightVector {
  std::array<int, 4> w{0, 0, 0, 0};

  static WeightVector make(int w_i, int w_x, int w_y, int w_z);
  int n() const { return w[0] + w[1] + w[2] + w[3]; }
  int operator[](int i) const { return w[static_cast<std::size_t>(i)]; }
  friend auto operator<=>(const WeightVector&, const WeightVector&) = default;
};

/// All weight vectors with total n, lexicographically descending.
std::vector<WeightVector> enumerate_weights(int n);

/// n! / (w_I! w_X! w_Y! w_Z!) as a double.
double multinomial(const WeightVector& w);

/// p_I^w_I p_X^w_X p_Y^w_Y p_Z^w_Z with 0^0 = 1.
double string_probability(const std::array<double, 4>& p, const WeightVector& w);

/// Complete homogeneous symmetric polynomials h_0..h_kmax of x.
std::vector<double> complete_homogeneous(const std::array<double, 4>& x, int kmax);

/// s_lambda(x) from the Jacobi-Trudi determinant det[h_{lambda_i - i + j}]
/// of size l(lambda).
double schur_polynomial(const Partition& lambda, const std::array<double, 4>& x);

/// s_lambda(x) by the branching rule: a sum of non-negative terms, accurate
/// for long shapes where the determinant cancels.
double schur_polynomial_branching(const Partition& lambda, const std::array<double, 4>& x);

/// Semistandard tableaux of shape lambda and content w (entries 1..4).
std::uint64_t kostka_number(const Partition& lambda, const WeightVector& w);

/// P(lambda) = dim S_lambda s_lambda(p_I, p_X, p_Y, p_Z) over lambda |-_4 n.
std::map<Partition, double> irrep_measurement_distribution(const PauliChannel& channel, int n);

/// Mass of the partitions with at most two rows.
double two_row_probability(const PauliChannel& channel, int n);

struct MeasureEntry {
  Partition lambda;
  WeightVector weight;
  std::uint64_t multiplicity = 0;  // dim S_lambda * K_{lambda, w}
  double probability_mass = 0.0;
};

struct EigenvalueMeasure {
  std::vector<MeasureEntry> entries;
  double total_mass() const;
};

/// Entries with zero Kostka number are omitted.
EigenvalueMeasure choi_eigenvalue_measure(const PauliChannel& channel, int n);

using WeightPredicate = std::function<bool(const WeightVector&)>;

struct AnnihilationCounts {
  double total_in_span = 0.0;
  double non_annihilating = 0.0;
};

/// total = sum_{w in T} sum_lambda dim S_lambda K_{lambda,w};
/// non_annihilating restricts to lambda_3 = lambda_4 = 0.
AnnihilationCounts annihilation_counts(int n, const WeightPredicate& in_set);

bool is_strongly_typical(const WeightVector& w, const std::array<double, 4>& dist, double delta);

struct TypicalSetStats {
  double mass = 0.0;
  double count = 0.0;     // number of strings
  double min_prob = 0.0;  // per string
  double max_prob = 0.0;
};

/// Exact sums over strongly typical weight classes. Classes that use a
/// zero-probability Pauli are excluded.
TypicalSetStats typical_set_stats(const PauliChannel& channel, int n, double delta);

struct TypicalityFit {
  double entropy = 0.0;      // H(p) in bits
  double c_count = 0.0;      // |log2(count)/n - H| <= c_count * delta
  double c_equipart = 0.0;   // |-log2(prob)/n - H| <= c_equipart * delta, every typical string
};

/// Smallest constants for which the cardinality and equipartition windows
/// hold at every n in `ns`.
TypicalityFit fit_typicality_constants(const PauliChannel& channel, double delta, const std::vector<int>& ns);

/// Sum over lambda |-_4 n with lambda_3 = lambda_4 = 0 of dim S_lambda dim V^4_lambda.
std::uint64_t two_row_rank_bound(int n);

struct RankCheck {
  int observed_rank = 0;
  std::uint64_t two_row_bound = 0;
  bool holds() const { return static_cast<std::uint64_t>(observed_rank) <= two_row_bound; }
};

/// Environment rank for the n-qubit input rho, against the two-row bound.
RankCheck complementary_rank_check(const Eigen::MatrixXcd& rho, const PauliChannel& channel);
RankCheck complementary_rank_check(const SymmetricInput& input, const PauliChannel& channel);

}  // namespace symcap
