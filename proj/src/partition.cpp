// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "symcap/rep_core.hpp"

namespace symcap {

Partition Partition::make(const std::vector<int>& parts, int d) {
  if (d < 1 || d > 4) throw DomainError("partition: d must be in 1..4");
  Partition p;
  p.d_ = d;
  int nonzero = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] < 0) throw DomainError("partition: negative part");
    if (i > 0 && parts[i] > parts[i - 1]) throw DomainError("partition: parts must be non-increasing");
    if (parts[i] > 0) ++nonzero;
  }
  if (nonzero > d) throw DomainError("partition: more than d non-zero parts");
  for (std::size_t i = 0; i < parts.size() && i < 4; ++i) p.parts_[i] = parts[i];
  for (int v : p.parts_) p.n_ += v;
  return p;
}

int Partition::rows() const {
  int r = 0;
  for (int i = 0; i < d_; ++i) r += parts_[static_cast<std::size_t>(i)] > 0 ? 1 : 0;
  return r;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < d_; ++i) os << (i ? "," : "") << parts_[static_cast<std::size_t>(i)];
  os << ')';
  return os.str();
}

std::vector<Partition> enumerate_partitions(int n, int d) {
  if (n <= 0) throw DomainError("enumerate_partitions: n must be positive");
  if (d < 1 || d > 4) throw DomainError("enumerate_partitions: d must be in 1..4");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Depth-first with the largest first part first gives descending lex order.
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (static_cast<int>(cur.size()) == d) {
      if (remaining == 0) out.push_back(Partition::make(cur, d));
      return;
    }
    const int slots = d - static_cast<int>(cur.size());
    for (int v = std::min(remaining, max_part); v >= 0; --v) {
      if (static_cast<long>(v) * slots < remaining) break;
      cur.push_back(v);
      rec(remaining - v, v);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

namespace {

struct PascalTable {
  std::array<std::array<std::uint64_t, kMaxIrrepN + 1>, kMaxIrrepN + 1> c{};
  PascalTable() {
    for (int n = 0; n <= kMaxIrrepN; ++n) {
      c[n][0] = c[n][n] = 1;
      for (int k = 1; k < n; ++k) c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
  }
};

const PascalTable& pascal() {
  static const PascalTable t;
  return t;
}

// Hook lengths of every box of lambda.
std::vector<int> hook_lengths(const Partition& lambda) {
  std::vector<int> hooks;
  const int d = lambda.d();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < lambda[i]; ++j) {
      int below = 0;
      for (int r = i + 1; r < d; ++r) below += lambda[r] > j ? 1 : 0;
      hooks.push_back(lambda[i] - j + below);
    }
  }
  return hooks;
}

void add_prime_exponents(int value, int sign, std::vector<int>& exps) {
  for (int p = 2; value > 1; ++p) {
    while (value % p == 0) {
      exps[static_cast<std::size_t>(p)] += sign;
      value /= p;
    }
  }
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxIrrepN || k < 0 || k > n) throw DomainError("binomial: argument out of range");
  return pascal().c[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

std::uint64_t specht_dim(const Partition& lambda) {
  const int n = lambda.n();
  if (n == 0) return 1;
  std::vector<int> exps(static_cast<std::size_t>(n) + 1, 0);
  for (int v = 2; v <= n; ++v) add_prime_exponents(v, +1, exps);
  for (int h : hook_lengths(lambda)) add_prime_exponents(h, -1, exps);
  std::uint64_t result = 1;
  for (int p = 2; p <= n; ++p) {
    for (int e = 0; e < exps[static_cast<std::size_t>(p)]; ++e) {
      if (__builtin_mul_overflow(result, static_cast<std::uint64_t>(p), &result)) {
        throw std::overflow_error("specht_dim: value exceeds 64 bits for " + lambda.to_string());
      }
    }
  }
  return result;
}

double specht_dim_real(const Partition& lambda) {
  double log_dim = std::lgamma(lambda.n() + 1.0);
  for (int h : hook_lengths(lambda)) log_dim -= std::log(static_cast<double>(h));
  return std::exp(log_dim);
}

std::uint64_t weyl_dim(const Partition& lambda, int d) {
  if (d < 1 || d > 4 || lambda.rows() > d) throw DomainError("weyl_dim: lambda has more rows than d");
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const int li = i < lambda.d() ? lambda[i] : 0;
      const int lj = j < lambda.d() ? lambda[j] : 0;
      num *= static_cast<unsigned>(li - lj + j - i);
      den *= static_cast<unsigned>(j - i);
    }
  }
  const unsigned __int128 v = num / den;
  if (v > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("weyl_dim overflow");
  return static_cast<std::uint64_t>(v);
}

}  // namespace symcap
