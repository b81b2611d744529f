// SPDX-License-Identifier: Apache-2.0
#include "symcap/degeneracy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "symcap/oracle.hpp"

namespace symcap {

WeightVector WeightVector::make(int w_i, int w_x, int w_y, int w_z) {
  if (w_i < 0 || w_x < 0 || w_y < 0 || w_z < 0) throw DomainError("weight vector: negative count");
  return {{w_i, w_x, w_y, w_z}};
}

std::vector<WeightVector> enumerate_weights(int n) {
  if (n < 0) throw DomainError("enumerate_weights: n must be non-negative");
  std::vector<WeightVector> out;
  for (int a = n; a >= 0; --a) {
    for (int b = n - a; b >= 0; --b) {
      for (int c = n - a - b; c >= 0; --c) out.push_back({{a, b, c, n - a - b - c}});
    }
  }
  return out;
}

double multinomial(const WeightVector& w) {
  double log_v = std::lgamma(w.n() + 1.0);
  for (int v : w.w) log_v -= std::lgamma(v + 1.0);
  return std::round(std::exp(log_v));
}

double string_probability(const std::array<double, 4>& p, const WeightVector& w) {
  double v = 1.0;
  for (int j = 0; j < 4; ++j) {
    if (w[j] > 0) v *= std::pow(p[static_cast<std::size_t>(j)], w[j]);
  }
  return v;
}

std::vector<double> complete_homogeneous(const std::array<double, 4>& x, int kmax) {
  std::vector<double> h(static_cast<std::size_t>(std::max(kmax, 0)) + 1, 0.0);
  h[0] = 1.0;
  for (double xi : x) {
    for (std::size_t k = 1; k < h.size(); ++k) h[k] += xi * h[k - 1];
  }
  return h;
}

double schur_polynomial(const Partition& lambda, const std::array<double, 4>& x) {
  const int len = lambda.rows();
  if (len == 0) return 1.0;
  if (len > 4) throw DomainError("schur_polynomial: more than four rows");
  const auto h = complete_homogeneous(x, lambda.n() + len);
  auto hk = [&](int k) { return k < 0 ? 0.0 : h[static_cast<std::size_t>(k)]; };
  Eigen::MatrixXd m(len, len);
  for (int i = 0; i < len; ++i) {
    for (int j = 0; j < len; ++j) m(i, j) = hk(lambda[i] - i + j);
  }
  return m.determinant();
}

namespace {

using Shape = std::array<int, 4>;

// Calls fn(mu) for every mu with lambda / mu a horizontal strip of size
// `size` and at most `rows` non-zero parts.
template <class Fn>
void for_each_strip(const Shape& lambda, int size, int rows, Fn&& fn) {
  Shape mu{0, 0, 0, 0};
  auto rec = [&](auto&& self, int i, int removed) -> void {
    if (i == 4) {
      if (removed == size) fn(mu);
      return;
    }
    const int next = (i + 1 < 4) ? lambda[static_cast<std::size_t>(i + 1)] : 0;
    const int hi = lambda[static_cast<std::size_t>(i)];
    // Interlacing: lambda_{i+1} <= mu_i <= lambda_i, and mu_i = 0 past `rows`.
    const int top = i >= rows ? 0 : hi;
    for (int v = next; v <= top; ++v) {
      const int r = removed + (hi - v);
      if (r > size) continue;
      mu[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, r);
    }
  };
  rec(rec, 0, 0);
}

Shape shape_of(const Partition& p) {
  return {p[0], p.d() > 1 ? p[1] : 0, p.d() > 2 ? p[2] : 0, p.d() > 3 ? p[3] : 0};
}

std::uint64_t kostka_rec(const Shape& lambda, const std::array<int, 4>& w, int letters) {
  if (letters == 0) return (lambda[0] == 0) ? 1 : 0;
  std::uint64_t total = 0;
  for_each_strip(lambda, w[static_cast<std::size_t>(letters - 1)], letters - 1,
                 [&](const Shape& mu) { total += kostka_rec(mu, w, letters - 1); });
  return total;
}

// Memo of s_mu(x_1..x_letters) keyed by (mu, letters).
using BranchingMemo = std::map<std::pair<Shape, int>, double>;

double branching_rec(const Shape& lambda, const std::array<double, 4>& x, int letters, BranchingMemo& memo) {
  if (letters == 0) return (lambda[0] == 0) ? 1.0 : 0.0;
  const auto key = std::make_pair(lambda, letters);
  if (const auto it = memo.find(key); it != memo.end()) return it->second;
  const int n = lambda[0] + lambda[1] + lambda[2] + lambda[3];
  double total = 0.0;
  const double xl = x[static_cast<std::size_t>(letters - 1)];
  for (int size = 0; size <= n; ++size) {
    const double f = size == 0 ? 1.0 : std::pow(xl, size);
    if (f == 0.0) continue;
    for_each_strip(lambda, size, letters - 1,
                   [&](const Shape& mu) { total += f * branching_rec(mu, x, letters - 1, memo); });
  }
  memo.emplace(key, total);
  return total;
}

// Exact Specht dimension where it fits in 64 bits.
double specht_dim_value(const Partition& lambda) {
  try {
    return static_cast<double>(specht_dim(lambda));
  } catch (const std::overflow_error&) {
    return specht_dim_real(lambda);
  }
}

}  // namespace

double schur_polynomial_branching(const Partition& lambda, const std::array<double, 4>& x) {
  if (lambda.rows() > 4) throw DomainError("schur_polynomial_branching: more than four rows");
  BranchingMemo memo;
  return branching_rec(shape_of(lambda), x, 4, memo);
}

std::uint64_t kostka_number(const Partition& lambda, const WeightVector& w) {
  if (w.n() != lambda.n()) return 0;
  if (lambda.rows() > 4) return 0;
  // Kostka numbers are symmetric in the content; sorting shortens the search.
  std::array<int, 4> sorted = w.w;
  std::sort(sorted.begin(), sorted.end(), std::greater<int>());
  return kostka_rec(shape_of(lambda), sorted, 4);
}

std::map<Partition, double> irrep_measurement_distribution(const PauliChannel& channel, int n) {
  if (n < 1) throw DomainError("irrep_measurement_distribution: n must be at least 1");
  if (n > kMaxIrrepN) throw DomainError("irrep_measurement_distribution: n exceeds supported range");
  const auto p = channel.probabilities();
  std::map<Partition, double> out;
  BranchingMemo memo;
  for (const auto& lambda : enumerate_partitions(n, 4)) {
    out[lambda] = specht_dim_real(lambda) * branching_rec(shape_of(lambda), p, 4, memo);
  }
  return out;
}

double two_row_probability(const PauliChannel& channel, int n) {
  if (n < 1) throw DomainError("two_row_probability: n must be at least 1");
  const auto p = channel.probabilities();
  double total = 0.0;
  BranchingMemo memo;
  for (const auto& lambda : enumerate_partitions(n, 4)) {
    if (lambda[2] != 0) continue;
    total += specht_dim_real(lambda) * branching_rec(shape_of(lambda), p, 4, memo);
  }
  return total;
}

double EigenvalueMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.probability_mass;
  return s;
}

EigenvalueMeasure choi_eigenvalue_measure(const PauliChannel& channel, int n) {
  if (n < 1) throw DomainError("choi_eigenvalue_measure: n must be at least 1");
  const auto p = channel.probabilities();
  const auto weights = enumerate_weights(n);
  EigenvalueMeasure m;
  for (const auto& lambda : enumerate_partitions(n, 4)) {
    const std::uint64_t ds = specht_dim(lambda);
    std::map<std::array<int, 4>, std::uint64_t> cache;
    for (const auto& w : weights) {
      std::array<int, 4> key = w.w;
      std::sort(key.begin(), key.end(), std::greater<int>());
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, kostka_number(lambda, w)).first;
      const std::uint64_t k = it->second;
      if (k == 0) continue;
      if (ds > std::numeric_limits<std::uint64_t>::max() / k) {
        throw std::overflow_error("choi_eigenvalue_measure: multiplicity exceeds 64 bits");
      }
      MeasureEntry e;
      e.lambda = lambda;
      e.weight = w;
      e.multiplicity = ds * k;
      e.probability_mass = static_cast<double>(e.multiplicity) * string_probability(p, w);
      m.entries.push_back(e);
    }
  }
  return m;
}

AnnihilationCounts annihilation_counts(int n, const WeightPredicate& in_set) {
  if (n < 1) throw DomainError("annihilation_counts: n must be at least 1");
  AnnihilationCounts out;
  const auto partitions = enumerate_partitions(n, 4);
  for (const auto& w : enumerate_weights(n)) {
    if (in_set && !in_set(w)) continue;
    for (const auto& lambda : partitions) {
      const std::uint64_t k = kostka_number(lambda, w);
      if (k == 0) continue;
      const double v = specht_dim_value(lambda) * static_cast<double>(k);
      out.total_in_span += v;
      if (lambda[2] == 0) out.non_annihilating += v;
    }
  }
  return out;
}

bool is_strongly_typical(const WeightVector& w, const std::array<double, 4>& dist, double delta) {
  if (!(delta > 0.0)) throw DomainError("is_strongly_typical: delta must be positive");
  const double n = w.n();
  if (n <= 0) return true;
  // Compare counts rather than frequencies, with a little slack so classes on
  // the boundary (e.g. 13/20 against 0.7 - 0.05) are kept.
  const double slack = 1e-9 * std::max(1.0, n * delta);
  for (int j = 0; j < 4; ++j) {
    if (std::abs(w[j] - n * dist[static_cast<std::size_t>(j)]) > n * delta + slack) return false;
  }
  return true;
}

namespace {

bool uses_impossible_pauli(const WeightVector& w, const std::array<double, 4>& p) {
  for (int j = 0; j < 4; ++j) {
    if (w[j] > 0 && p[static_cast<std::size_t>(j)] == 0.0) return true;
  }
  return false;
}

}  // namespace

TypicalSetStats typical_set_stats(const PauliChannel& channel, int n, double delta) {
  if (n < 1) throw DomainError("typical_set_stats: n must be at least 1");
  const auto p = channel.probabilities();
  TypicalSetStats st;
  bool any = false;
  for (const auto& w : enumerate_weights(n)) {
    if (uses_impossible_pauli(w, p) || !is_strongly_typical(w, p, delta)) continue;
    const double prob = string_probability(p, w);
    const double count = multinomial(w);
    st.mass += count * prob;
    st.count += count;
    st.min_prob = any ? std::min(st.min_prob, prob) : prob;
    st.max_prob = any ? std::max(st.max_prob, prob) : prob;
    any = true;
  }
  return st;
}

TypicalityFit fit_typicality_constants(const PauliChannel& channel, double delta, const std::vector<int>& ns) {
  const auto p = channel.probabilities();
  TypicalityFit fit;
  fit.entropy = shannon_bits(p);
  for (int n : ns) {
    const auto st = typical_set_stats(channel, n, delta);
    if (st.count <= 0.0) continue;
    fit.c_count = std::max(fit.c_count, std::abs(std::log2(st.count) / n - fit.entropy) / delta);
    for (double prob : {st.min_prob, st.max_prob}) {
      fit.c_equipart = std::max(fit.c_equipart, std::abs(-std::log2(prob) / n - fit.entropy) / delta);
    }
  }
  return fit;
}

std::uint64_t two_row_rank_bound(int n) {
  if (n < 1) throw DomainError("two_row_rank_bound: n must be at least 1");
  std::uint64_t total = 0;
  for (const auto& lambda : enumerate_partitions(n, 4)) {
    if (lambda[2] != 0) continue;
    total += specht_dim(lambda) * weyl_dim(lambda, 4);
  }
  return total;
}

RankCheck complementary_rank_check(const Eigen::MatrixXcd& rho, const PauliChannel& channel) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw SizeError("complementary_rank_check: matrix dimension is not a power of two");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  if (n > kComplementaryMaxN) {
    throw SizeError("complementary_rank_check: n=" + std::to_string(n) + " exceeds the limit of " +
                    std::to_string(kComplementaryMaxN));
  }
  RankCheck rc;
  // The Gram form has the same non-zero spectrum as the environment state
  // and is at most rank(rho) * 2^n wide.
  rc.observed_rank = numeric_rank(complementary_gram(rho, channel));
  rc.two_row_bound = two_row_rank_bound(n);
  return rc;
}

RankCheck complementary_rank_check(const SymmetricInput& input, const PauliChannel& channel) {
  if (input.n > kComplementaryMaxN) {
    throw SizeError("complementary_rank_check: n=" + std::to_string(input.n) + " exceeds the limit of " +
                    std::to_string(kComplementaryMaxN));
  }
  return complementary_rank_check(channel_input(input), channel);
}

}  // namespace symcap
