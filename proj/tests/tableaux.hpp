// SPDX-License-Identifier: Apache-2.0
#pragma once

// Tableau enumeration, symmetric-group characters and dense isotypic
// projectors, used as independent references for the degeneracy module.

#include <functional>
#include <numeric>

#include "support.hpp"

namespace symcap::test {

// Every semistandard filling of shape lambda with entries 0..3, passed to
// `visit` as a content vector.
inline void for_each_ssyt(const Partition& lambda, const std::function<void(const std::array<int, 4>&)>& visit) {
  std::vector<std::vector<int>> t;
  for (int r = 0; r < 4; ++r) t.emplace_back(static_cast<std::size_t>(lambda[r]), -1);
  std::array<int, 4> content{};
  std::function<void(int, int)> fill = [&](int r, int c) {
    if (r == 4 || lambda[r] == 0) {
      visit(content);
      return;
    }
    if (c == lambda[r]) {
      fill(r + 1, 0);
      return;
    }
    const auto rr = static_cast<std::size_t>(r);
    const auto cc = static_cast<std::size_t>(c);
    int lo = c > 0 ? t[rr][cc - 1] : 0;
    if (r > 0) lo = std::max(lo, t[rr - 1][cc] + 1);
    for (int v = lo; v < 4; ++v) {
      t[rr][cc] = v;
      ++content[static_cast<std::size_t>(v)];
      fill(r, c + 1);
      --content[static_cast<std::size_t>(v)];
    }
  };
  fill(0, 0);
}

inline double ssyt_schur(const Partition& lambda, const std::array<double, 4>& x) {
  double s = 0.0;
  for_each_ssyt(lambda, [&](const std::array<int, 4>& w) {
    double m = 1.0;
    for (int j = 0; j < 4; ++j) m *= std::pow(x[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
    s += m;
  });
  return s;
}

inline std::uint64_t ssyt_count(const Partition& lambda, const std::array<int, 4>* content = nullptr) {
  std::uint64_t c = 0;
  for_each_ssyt(lambda, [&](const std::array<int, 4>& w) { c += content == nullptr || w == *content; });
  return c;
}

// Standard tableaux by removing corners.
inline std::uint64_t syt_count(std::vector<int> rows) {
  if (std::accumulate(rows.begin(), rows.end(), 0) == 0) return 1;
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] > 0 && (i + 1 == rows.size() || rows[i + 1] < rows[i])) {
      --rows[i];
      c += syt_count(rows);
      ++rows[i];
    }
  }
  return c;
}

// Murnaghan-Nakayama on beta sets: chi_lambda at cycle type mu.
inline int mn_character(std::vector<int> beta, std::vector<int> mu) {
  if (mu.empty()) return 1;
  const int r = mu.back();
  mu.pop_back();
  int total = 0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const int b = beta[i];
    const int to = b - r;
    if (to < 0 || std::find(beta.begin(), beta.end(), to) != beta.end()) continue;
    int between = 0;
    for (int x : beta) between += x > to && x < b;
    std::vector<int> next = beta;
    next[i] = to;
    total += (between % 2 ? -1 : 1) * mn_character(next, mu);
  }
  return total;
}

inline int character(const Partition& lambda, const std::vector<int>& cycle_type) {
  std::vector<int> beta;
  for (int i = 0; i < 4; ++i) beta.push_back(lambda[i] + (3 - i));
  return mn_character(beta, cycle_type);
}

// Isotypic projector dim/n! sum_pi chi(pi) U_pi on (C^4)^{(x) n}.
inline Eigen::MatrixXcd isotypic_projector(const Partition& lambda) {
  const int n = lambda.n();
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(dim, dim);
  const auto perms = permutations(n);
  for (const auto& perm : perms) {
    const double chi = character(lambda, cycle_type(perm));
    if (chi == 0.0) continue;
    for (Eigen::Index x = 0; x < dim; ++x) {
      Eigen::Index y = 0;
      for (int k = 0; k < n; ++k) {
        const Eigen::Index digit = (x >> (2 * k)) & 3;
        y |= digit << (2 * perm[static_cast<std::size_t>(k)]);
      }
      proj(y, x) += chi;
    }
  }
  return proj * (static_cast<double>(syt_count(lambda.parts())) / static_cast<double>(perms.size()));
}

}  // namespace symcap::test
