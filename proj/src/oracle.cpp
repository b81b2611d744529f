// SPDX-License-Identifier: Apache-2.0
#include "symcap/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "symcap/basis.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

namespace {

using C = std::complex<double>;

void check_size(int n, int cap, const char* what) {
  if (n < 1) throw SizeError(std::string(what) + ": n must be at least 1");
  if (n > cap) {
    throw SizeError(std::string(what) + ": n=" + std::to_string(n) + " exceeds the dense limit of " +
                    std::to_string(cap));
  }
}

Eigen::MatrixXcd trace_out_msb(const Eigen::MatrixXcd& rho) {
  const Eigen::Index d = rho.rows() / 2;
  return rho.topLeftCorner(d, d) + rho.bottomRightCorner(d, d);
}

// P_b P_a = phase * P_c for single-qubit Paulis.
struct PauliProduct {
  int c = 0;
  C phase{1.0, 0.0};
};

const std::array<PauliProduct, 16>& product_table() {
  static const std::array<PauliProduct, 16> table = [] {
    std::array<PauliProduct, 16> t{};
    for (int b = 0; b < 4; ++b) {
      for (int a = 0; a < 4; ++a) {
        const ComplexMatrix2 m = pauli(b) * pauli(a);
        for (int c = 0; c < 4; ++c) {
          const C tr = (pauli(c) * m).trace();
          if (std::abs(tr) > 0.5) t[static_cast<std::size_t>(b * 4 + a)] = {c, tr / 2.0};
        }
      }
    }
    return t;
  }();
  return table;
}

// tr(P_s rho) for every Pauli string s = sum_q s_q 4^q.
std::vector<C> pauli_expectations(const Eigen::MatrixXcd& rho, int n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t strings = std::size_t{1} << (2 * n);
  std::vector<C> out(strings);
  for (std::size_t s = 0; s < strings; ++s) {
    std::size_t flip = 0;
    for (int q = 0; q < n; ++q) {
      const int pq = static_cast<int>((s >> (2 * q)) & 3u);
      if (pq == 1 || pq == 2) flip |= std::size_t{1} << q;
    }
    C acc{0.0, 0.0};
    for (std::size_t x = 0; x < dim; ++x) {
      const std::size_t y = x ^ flip;
      C entry{1.0, 0.0};
      for (int q = 0; q < n; ++q) {
        const int pq = static_cast<int>((s >> (2 * q)) & 3u);
        entry *= pauli(pq)(static_cast<int>((x >> q) & 1u), static_cast<int>((y >> q) & 1u));
      }
      acc += entry * rho(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
    }
    out[s] = acc;
  }
  return out;
}

}  // namespace

DenseState build_purification(const SymmetricInput& input) {
  const int n = input.n;
  check_size(n, kOracleMaxN, "build_purification");
  const std::size_t dim = std::size_t{1} << n;
  DenseState st;
  st.n = n;
  st.purification = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * dim));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < 2; ++r) {
    for (std::size_t x = 0; x < dim; ++x) {
      const int k = std::popcount(x);
      const double norm = std::sqrt(static_cast<double>(binomial(n, k)));
      st.purification(static_cast<Eigen::Index>(r * dim + x)) = inv_sqrt2 * input.alpha(r, k) / norm;
    }
  }
  return st;
}

Eigen::MatrixXcd apply_channel_qubitwise(const PauliChannel& channel, const Eigen::MatrixXcd& rho,
                                         const std::vector<int>& qubits) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw SizeError("apply_channel_qubitwise: matrix dimension is not a power of two");
  }
  const int total = std::countr_zero(static_cast<std::uint64_t>(dim));
  Eigen::MatrixXcd out = rho;
  for (int q : qubits) {
    if (q < 0 || q >= total) throw SizeError("apply_channel_qubitwise: qubit index out of range");
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i & bit) continue;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (j & bit) continue;
        ComplexMatrix2 m;
        m << out(i, j), out(i, j | bit), out(i | bit, j), out(i | bit, j | bit);
        const ComplexMatrix2 r = apply_single<double>(channel, m);
        out(i, j) = r(0, 0);
        out(i, j | bit) = r(0, 1);
        out(i | bit, j) = r(1, 0);
        out(i | bit, j | bit) = r(1, 1);
      }
    }
  }
  return out;
}

double dense_entropy_bits(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd h = (rho + rho.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()(i);
    if (v > 0.0) s -= v * std::log2(v);
  }
  return s;
}

int numeric_rank(const Eigen::MatrixXcd& psd) {
  const Eigen::MatrixXcd h = (psd + psd.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kRankThreshold * top) ++rank;
  }
  return rank;
}

Eigen::MatrixXcd channel_input(const SymmetricInput& input) {
  const DenseState st = build_purification(input);
  return trace_out_msb(st.purification * st.purification.adjoint());
}

double brute_ci(const SymmetricInput& input, const PauliChannel& channel) {
  const int n = input.n;
  check_size(n, kOracleMaxN, "brute_ci");
  const DenseState st = build_purification(input);
  std::vector<int> qubits(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) qubits[static_cast<std::size_t>(q)] = q;
  const Eigen::MatrixXcd joint = apply_channel_qubitwise(channel, st.purification * st.purification.adjoint(), qubits);
  return dense_entropy_bits(trace_out_msb(joint)) - dense_entropy_bits(joint);
}

Eigen::MatrixXcd complementary_output(const Eigen::MatrixXcd& rho, const PauliChannel& channel) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw SizeError("complementary_output: matrix dimension is not a power of two");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  check_size(n, kComplementaryMaxN, "complementary_output");

  std::vector<int> allowed;
  const auto probs = channel.probabilities();
  for (int k = 0; k < 4; ++k) {
    if (probs[static_cast<std::size_t>(k)] > 0.0) allowed.push_back(k);
  }
  const std::size_t kk = allowed.size();
  std::size_t env = 1;
  for (int q = 0; q < n; ++q) env *= kk;
  if (env == 1) return Eigen::MatrixXcd::Ones(1, 1) * rho.trace();

  const auto expect = pauli_expectations(rho, n);
  const auto& table = product_table();
  auto digits = [&](std::size_t s) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      d[static_cast<std::size_t>(q)] = allowed[s % kk];
      s /= kk;
    }
    return d;
  };
  std::vector<std::vector<int>> strings(env);
  std::vector<double> weight(env, 1.0);
  for (std::size_t s = 0; s < env; ++s) {
    strings[s] = digits(s);
    for (int p : strings[s]) weight[s] *= probs[static_cast<std::size_t>(p)];
  }

  Eigen::MatrixXcd e(static_cast<Eigen::Index>(env), static_cast<Eigen::Index>(env));
  for (std::size_t s1 = 0; s1 < env; ++s1) {
    for (std::size_t s2 = 0; s2 < env; ++s2) {
      // tr(A1 rho A2^H) = sqrt(w1 w2) tr(P2 P1 rho)
      C phase{1.0, 0.0};
      std::size_t code = 0;
      for (int q = 0; q < n; ++q) {
        const auto& pr = table[static_cast<std::size_t>(strings[s2][static_cast<std::size_t>(q)] * 4 +
                                                        strings[s1][static_cast<std::size_t>(q)])];
        phase *= pr.phase;
        code |= static_cast<std::size_t>(pr.c) << (2 * q);
      }
      e(static_cast<Eigen::Index>(s1), static_cast<Eigen::Index>(s2)) =
          std::sqrt(weight[s1] * weight[s2]) * phase * expect[code];
    }
  }
  return e;
}

Eigen::MatrixXcd complementary_gram(const Eigen::MatrixXcd& rho, const PauliChannel& channel) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || dim < 2 || (dim & (dim - 1)) != 0) {
    throw SizeError("complementary_gram: matrix dimension is not a power of two");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  check_size(n, kOracleMaxN, "complementary_gram");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((rho + rho.adjoint()) / 2.0);
  const auto& mu = es.eigenvalues();
  const double top = mu.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > kRankThreshold * top) keep.push_back(i);
  }
  std::vector<int> qubits(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) qubits[static_cast<std::size_t>(q)] = q;

  const auto r = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd g(r * dim, r * dim);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      const auto va = es.eigenvectors().col(keep[static_cast<std::size_t>(a)]);
      const auto vb = es.eigenvectors().col(keep[static_cast<std::size_t>(b)]);
      const Eigen::MatrixXcd img = apply_channel_qubitwise(channel, vb * va.adjoint(), qubits);
      const double w = std::sqrt(mu(keep[static_cast<std::size_t>(a)]) * mu(keep[static_cast<std::size_t>(b)]));
      g.block(a * dim, b * dim, dim, dim) = w * img.transpose();
    }
  }
  return g;
}

double brute_ci_via_environment(const SymmetricInput& input, const PauliChannel& channel) {
  const Eigen::MatrixXcd rho = channel_input(input);
  std::vector<int> qubits(static_cast<std::size_t>(input.n));
  for (int q = 0; q < input.n; ++q) qubits[static_cast<std::size_t>(q)] = q;
  const double s_out = dense_entropy_bits(apply_channel_qubitwise(channel, rho, qubits));
  return s_out - dense_entropy_bits(complementary_output(rho, channel));
}

OracleSuiteResult run_oracle_suite(const OracleSuiteConfig& config, const CiEvaluator& fast) {
  if (config.n_max > kOracleSuiteMaxN) {
    throw SizeError("oracle suite: n=" + std::to_string(config.n_max) + " exceeds the suite limit of " +
                    std::to_string(kOracleSuiteMaxN));
  }
  if (config.n_min < 1 || config.n_min > config.n_max) throw SizeError("oracle suite: empty n range");
  const CiEvaluator eval = fast ? fast : CiEvaluator([](const SymmetricInput& in, const Precomputation& pre) {
    return evaluate_ci<double>(in, pre);
  });

  OracleSuiteResult result;
  for (std::size_t fi = 0; fi < config.families.size(); ++fi) {
    const FamilyKind family = config.families[fi];
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      const double p = config.p_values[pi];
      if (p < 0.0 || p > family_p_max(family)) continue;
      const PauliChannel ch = make_channel(family, p);
      for (int n = config.n_min; n <= config.n_max; ++n) {
        const SpanningBasis basis = choose_spanning_states(n, config.seed);
        const Precomputation pre = precompute<double>(ch, n, basis);
        std::vector<double> diffs(static_cast<std::size_t>(config.cases_per_n));
        parallel_for(diffs.size(), config.threads, [&](std::size_t c) {
          std::seed_seq seq{config.seed, static_cast<std::uint64_t>(fi), static_cast<std::uint64_t>(pi),
                            static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(c)};
          std::mt19937_64 rng(seq);
          const SymmetricInput in = random_symmetric_input(n, rng);
          diffs[c] = std::abs(eval(in, pre) - brute_ci(in, ch));
        });
        for (std::size_t c = 0; c < diffs.size(); ++c) {
          ++result.cases;
          const double d = std::isnan(diffs[c]) ? std::numeric_limits<double>::infinity() : diffs[c];
          if (d > config.tolerance) ++result.failures;
          if (d > result.max_diff || result.worst.empty()) {
            result.max_diff = std::max(result.max_diff, d);
            std::ostringstream os;
            os << family_short_name(family) << " p=" << p << " n=" << n << " case=" << c;
            result.worst = os.str();
          }
        }
      }
    }
  }
  return result;
}

}  // namespace symcap
