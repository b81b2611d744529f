// SPDX-License-Identifier: Apache-2.0
#include "symcap/coherent_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <type_traits>

#include <Eigen/Eigenvalues>

#include "symcap/kernels.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

SymmetricInput SymmetricInput::make(Eigen::MatrixXcd alpha) {
  if (alpha.rows() != 2 || alpha.cols() < 2) throw InputError("symmetric input: alpha must be 2 x (n+1) with n >= 1");
  for (int i = 0; i < 2; ++i) {
    if (!alpha.row(i).allFinite()) throw InputError("symmetric input: non-finite coefficient");
    if (std::abs(alpha.row(i).norm() - 1.0) > 1e-10) {
      throw InputError("symmetric input: row " + std::to_string(i) + " is not a unit vector");
    }
  }
  SymmetricInput in;
  in.n = static_cast<int>(alpha.cols()) - 1;
  in.alpha = std::move(alpha);
  return in;
}

SymmetricInput SymmetricInput::normalized(Eigen::MatrixXcd alpha) {
  if (alpha.rows() != 2 || alpha.cols() < 2) throw InputError("symmetric input: alpha must be 2 x (n+1) with n >= 1");
  for (int i = 0; i < 2; ++i) {
    const double norm = alpha.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("symmetric input: zero or non-finite row");
    alpha.row(i) /= norm;
  }
  return make(std::move(alpha));
}

SymmetricInput random_symmetric_input(int n, std::mt19937_64& rng) {
  if (n < 1) throw InputError("random_symmetric_input: n must be at least 1");
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd alpha(2, n + 1);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k <= n; ++k) {
      const double re = g(rng);
      const double im = g(rng);
      alpha(i, k) = {re, im};
    }
  }
  return SymmetricInput::normalized(std::move(alpha));
}

namespace {

template <class Real>
using RowMajorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Real>
void axpy(std::complex<Real> a, std::span<const std::complex<Real>> x, std::span<std::complex<Real>> y) {
  if constexpr (std::is_same_v<Real, double>) {
    kernels::caxpy(a, x, y);
  } else {
    kernels::caxpy_generic<Real>(a, x, y);
  }
}

template <class Real>
void axpy2(std::complex<Real> a0, std::complex<Real> a1, std::span<const std::complex<Real>> x,
           std::span<std::complex<Real>> y0, std::span<std::complex<Real>> y1) {
  if constexpr (std::is_same_v<Real, double>) {
    kernels::caxpy2(a0, a1, x, y0, y1);
  } else {
    kernels::caxpy_generic<Real>(a0, x, y0);
    kernels::caxpy_generic<Real>(a1, x, y1);
  }
}

// beta in the working precision. Extended precision re-solves the overlap
// system rather than widening the double solution.
template <class Real>
MatrixX<Real> beta_in(const SpanningBasis& basis) {
  if constexpr (std::is_same_v<Real, double>) {
    return basis.beta;
  } else {
    const int n = basis.n;
    MatrixX<Real> a(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
      for (int j = 0; j <= n; ++j) {
        const auto& s = basis.states[static_cast<std::size_t>(j)];
        std::complex<Real> v(std::sqrt(static_cast<Real>(binomial(n, k))), 0);
        const std::complex<Real> c0(s.c0.real(), s.c0.imag()), c1(s.c1.real(), s.c1.imag());
        for (int e = 0; e < n - k; ++e) v *= c0;
        for (int e = 0; e < k; ++e) v *= c1;
        a(k, j) = v;
      }
    }
    Eigen::ColPivHouseholderQR<MatrixX<Real>> qr(a);
    const MatrixX<Real> x = qr.solve(MatrixX<Real>::Identity(n + 1, n + 1));
    return x.transpose();
  }
}

template <class Real>
struct RawBlocks {
  // Un-normalized output blocks with the reference qubit split out:
  // c00 + c11 is the channel output block, [[c00, c01], [c01^H, c11]] the
  // joint reference/output block.
  RowMajorX<Real> c00, c11, c01;
  Real trace = 0;
};

template <class Real>
void accumulate_block(const SymmetricInput& input, const typename PrecomputationT<Real>::Block& blk, int n,
                      RawBlocks<Real>& out) {
  using C = std::complex<Real>;
  const int m = blk.dim;
  const std::size_t mm = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  RowMajorX<Real> h00 = RowMajorX<Real>::Zero(m, m);
  RowMajorX<Real> h11 = RowMajorX<Real>::Zero(m, m);
  out.c01 = RowMajorX<Real>::Zero(m, m);
  std::span<C> s00(h00.data(), mm), s11(h11.data(), mm), s01(out.c01.data(), mm);

  auto a = [&](int i, int k) {
    const auto v = input.alpha(i, k);
    return C(static_cast<Real>(v.real()), static_cast<Real>(v.imag()));
  };
  const Real half = Real(1) / 2;
  const Real quarter = Real(1) / 4;
  // Hermitian diagonal sub-blocks from the upper triangle in (k, l):
  // c_ii = H + H^H with H = sum_{k<l} m_kl ND_kl + 1/2 sum_k m_kk ND_kk.
  for (int k = 0; k <= n; ++k) {
    for (int l = k; l <= n; ++l) {
      const Real w = (k == l) ? quarter : half;
      const C m0 = w * a(0, k) * std::conj(a(0, l));
      const C m1 = w * a(1, k) * std::conj(a(1, l));
      axpy2<Real>(m0, m1, blk.nd_block(n, k, l), s00, s11);
    }
  }
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      axpy<Real>(half * a(0, k) * std::conj(a(1, l)), blk.nd_block(n, k, l), s01);
    }
  }
  out.c00 = h00 + h00.adjoint();
  out.c11 = h11 + h11.adjoint();
  out.trace = (out.c00.trace() + out.c11.trace()).real();
}

template <class Real>
MatrixX<Real> assemble_omega(const RawBlocks<Real>& raw) {
  const Eigen::Index m = raw.c00.rows();
  MatrixX<Real> omega(2 * m, 2 * m);
  omega.topLeftCorner(m, m) = raw.c00;
  omega.topRightCorner(m, m) = raw.c01;
  omega.bottomLeftCorner(m, m) = raw.c01.adjoint();
  omega.bottomRightCorner(m, m) = raw.c11;
  return omega;
}

template <class Real>
Real shannon_of_projected(std::vector<Real> eig) {
  const auto p = project_to_simplex<Real>(std::move(eig));
  Real h = 0;
  for (Real v : p) {
    if (v > 0) h -= v * std::log2(v);
  }
  return h;
}

template <class Real>
std::vector<Real> to_vector(const Eigen::Matrix<Real, Eigen::Dynamic, 1>& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

template <class Real>
PrecomputationT<Real> precompute(const PauliChannel& channel, int n, const SpanningBasis& basis,
                                 const PrecomputeOptions& options) {
  using C = std::complex<Real>;
  if (n < 1) throw DomainError("precompute: n must be at least 1");
  if (basis.n != n) throw DomainError("precompute: basis was built for a different n");
  PrecomputationT<Real> pre;
  pre.channel = channel;
  pre.n = n;
  pre.basis = basis;
  const auto lambdas = enumerate_partitions(n, 2);
  pre.blocks.resize(lambdas.size());

  const int n1 = n + 1;
  const MatrixX<Real> beta = beta_in<Real>(basis);
  const MatrixX<Real> beta_conj = beta.conjugate();

  // Channel images of |phi_a><phi_b|, shared by every lambda.
  std::vector<Matrix2<Real>> images(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n1));
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n1; ++b) {
      const auto& pa = basis.states[static_cast<std::size_t>(a)];
      const auto& pb = basis.states[static_cast<std::size_t>(b)];
      const C a0(pa.c0.real(), pa.c0.imag()), a1(pa.c1.real(), pa.c1.imag());
      const C b0(pb.c0.real(), pb.c0.imag()), b1(pb.c1.real(), pb.c1.imag());
      Matrix2<Real> outer;
      outer << a0 * std::conj(b0), a0 * std::conj(b1), a1 * std::conj(b0), a1 * std::conj(b1);
      images[static_cast<std::size_t>(a * n1 + b)] = apply_single<Real>(channel, outer);
    }
  }

  parallel_for(lambdas.size(), options.threads, [&](std::size_t t) {
    auto& blk = pre.blocks[t];
    blk.lambda = lambdas[t];
    blk.dim = blk.lambda.l() + 1;
    blk.specht = specht_dim_real(blk.lambda);
    const Eigen::Index mm = static_cast<Eigen::Index>(blk.dim) * blk.dim;
    const Eigen::Index row = static_cast<Eigen::Index>(n1) * mm;

    // Q as an (n+1) x ((n+1) * mm) row-major matrix: row a, column (b, entry).
    RowMajorX<Real> q(n1, row);
    for (int a = 0; a < n1; ++a) {
      for (int b = 0; b < n1; ++b) {
        irrep_q2_into<Real>(images[static_cast<std::size_t>(a * n1 + b)], blk.lambda, q.data() + a * row + b * mm);
      }
    }
    // T[k][b] = sum_a beta(k,a) Q[a][b]; ND[k][l] = sum_b conj(beta(l,b)) T[k][b].
    const RowMajorX<Real> tk = beta * q;
    blk.nd.assign(static_cast<std::size_t>(n1) * static_cast<std::size_t>(row), C(0, 0));
    for (int k = 0; k < n1; ++k) {
      Eigen::Map<const RowMajorX<Real>> tmat(tk.data() + k * row, n1, mm);
      Eigen::Map<RowMajorX<Real>> ndk(blk.nd.data() + k * row, n1, mm);
      ndk.noalias() = beta_conj * tmat;
    }
    if (options.keep_irrep_blocks) blk.q.assign(q.data(), q.data() + q.size());
  });
  return pre;
}

template <class Real>
BlockDecompositionT<Real> block_decomposition(const SymmetricInput& input, const PrecomputationT<Real>& pre) {
  if (input.n != pre.n) throw InputError("block_decomposition: input n does not match precomputation");
  BlockDecompositionT<Real> out;
  out.entries.reserve(pre.blocks.size());
  bool any = false;
  for (const auto& blk : pre.blocks) {
    RawBlocks<Real> raw;
    accumulate_block<Real>(input, blk, pre.n, raw);
    BlockEntryT<Real> e;
    e.lambda = blk.lambda;
    e.specht = blk.specht;
    e.c = raw.trace * static_cast<Real>(blk.specht);
    if (!(e.c >= static_cast<Real>(kBlockCutoff))) {
      e.skipped = true;
    } else {
      any = true;
      e.sigma = (raw.c00 + raw.c11) / raw.trace;
      e.omega = assemble_omega(raw) / raw.trace;
    }
    out.entries.push_back(std::move(e));
  }
  if (!any) throw NumericError("block_decomposition: every block weight is below the cutoff");
  return out;
}

template <class Real>
std::vector<Real> project_to_simplex(std::vector<Real> v) {
  if (v.empty()) return v;
  std::vector<Real> u = v;
  std::sort(u.begin(), u.end(), std::greater<Real>());
  Real cumsum = 0, theta = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const Real t = (cumsum - 1) / static_cast<Real>(j + 1);
    if (u[j] - t > 0) theta = t;
  }
  for (auto& x : v) x = std::max(x - theta, Real(0));
  return v;
}

template <class Real>
Real entropy_bits(const MatrixX<Real>& m) {
  if (m.rows() != m.cols()) throw NumericError("entropy_bits: matrix is not square");
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > static_cast<Real>(1e-9) * scale) {
    throw NumericError("entropy_bits: matrix is not Hermitian");
  }
  const MatrixX<Real> h = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Real>> es(h, Eigen::EigenvaluesOnly);
  return shannon_of_projected<Real>(to_vector<Real>(es.eigenvalues()));
}

template <class Real>
CiReport evaluate_ci_report(const SymmetricInput& input, const PrecomputationT<Real>& pre) {
  const auto dec = block_decomposition<Real>(input, pre);
  CiReport rep;
  Real total = 0;
  for (const auto& e : dec.entries) {
    CiBlockReport b;
    b.lambda = e.lambda;
    b.c = static_cast<double>(e.c);
    b.skipped = e.skipped;
    if (!e.skipped) {
      const Real ss = entropy_bits<Real>(e.sigma);
      const Real so = entropy_bits<Real>(e.omega);
      total += e.c * (ss - so);
      b.s_sigma = static_cast<double>(ss);
      b.s_omega = static_cast<double>(so);
    }
    rep.blocks.push_back(b);
  }
  rep.total = static_cast<double>(total);
  return rep;
}

template <class Real>
double evaluate_ci(const SymmetricInput& input, const PrecomputationT<Real>& pre) {
  return evaluate_ci_report<Real>(input, pre).total;
}

Eigen::MatrixXcd tangent_projection(const Eigen::MatrixXcd& alpha, const Eigen::MatrixXcd& grad) {
  Eigen::MatrixXcd g = grad;
  for (Eigen::Index i = 0; i < alpha.rows(); ++i) {
    // Eigen's dot conjugates its first argument.
    const std::complex<double> inner = alpha.row(i).dot(grad.row(i));
    g.row(i) -= (inner.real() / alpha.row(i).squaredNorm()) * alpha.row(i);
  }
  return g;
}

CiGradient evaluate_ci_gradient(const SymmetricInput& input, const Precomputation& pre) {
  using C = std::complex<double>;
  if (input.n != pre.n) throw InputError("evaluate_ci_gradient: input n does not match precomputation");
  const int n = pre.n;
  const int n1 = n + 1;
  // W_ij(k, l) = d CI / d m^{ij}_{kl}, with m^{ij}_{kl} = alpha_ik conj(alpha_jl) / 2.
  Eigen::MatrixXcd w00 = Eigen::MatrixXcd::Zero(n1, n1), w11 = w00, w01 = w00, w10 = w00;
  double value = 0.0;
  bool any = false;
  constexpr double kEigFloor = 1e-300;

  for (const auto& blk : pre.blocks) {
    RawBlocks<double> raw;
    accumulate_block<double>(input, blk, n, raw);
    const double c = raw.trace * blk.specht;
    if (!(c >= kBlockCutoff)) continue;
    any = true;
    const int m = blk.dim;
    const Eigen::MatrixXcd sigma = (raw.c00 + raw.c11) / raw.trace;
    const Eigen::MatrixXcd omega = assemble_omega(raw) / raw.trace;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_s((sigma + sigma.adjoint()) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_w((omega + omega.adjoint()) / 2.0);
    value += c * (shannon_of_projected<double>(to_vector<double>(es_s.eigenvalues())) -
                  shannon_of_projected<double>(to_vector<double>(es_w.eigenvalues())));

    // -log2 of the un-normalized blocks; the -1/ln2 part of h'(x) cancels
    // between the two terms because tr dB = tr dC.
    auto neg_log = [&](const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>& es) {
      Eigen::VectorXd d = es.eigenvalues();
      for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = -std::log2(std::max(d(i) * raw.trace, kEigFloor));
      return Eigen::MatrixXcd(es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint());
    };
    const Eigen::MatrixXcd f_b = neg_log(es_s);
    const Eigen::MatrixXcd f_c = neg_log(es_w);
    const RowMajorX<double> k00 = f_b - f_c.topLeftCorner(m, m);
    const RowMajorX<double> k11 = f_b - f_c.bottomRightCorner(m, m);
    const RowMajorX<double> k01 = f_c.topRightCorner(m, m);
    const std::size_t mm = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    const std::span<const C> s00(k00.data(), mm), s11(k11.data(), mm), s01(k01.data(), mm);
    const double ds = blk.specht;

    for (int k = 0; k < n1; ++k) {
      for (int l = k; l < n1; ++l) {
        const auto nd = blk.nd_block(n, k, l);
        const C a = ds * kernels::cdotc(s00, nd);
        const C b = ds * kernels::cdotc(s11, nd);
        w00(k, l) += a;
        w11(k, l) += b;
        if (l != k) {
          w00(l, k) += std::conj(a);
          w11(l, k) += std::conj(b);
        }
      }
    }
    for (int k = 0; k < n1; ++k) {
      for (int l = 0; l < n1; ++l) {
        const C a = -ds * kernels::cdotc(s01, blk.nd_block(n, k, l));
        w01(k, l) += a;
        w10(l, k) += std::conj(a);
      }
    }
  }
  if (!any) throw NumericError("evaluate_ci_gradient: every block weight is below the cutoff");

  // grad(j, l) = sum_{i,k} W_ij(k, l) alpha(i, k)
  const Eigen::MatrixXcd& al = input.alpha;
  Eigen::MatrixXcd g(2, n1);
  g.row(0) = al.row(0) * w00 + al.row(1) * w10;
  g.row(1) = al.row(0) * w01 + al.row(1) * w11;
  return {value, tangent_projection(al, g)};
}

template PrecomputationT<double> precompute<double>(const PauliChannel&, int, const SpanningBasis&,
                                                    const PrecomputeOptions&);
template PrecomputationT<long double> precompute<long double>(const PauliChannel&, int, const SpanningBasis&,
                                                              const PrecomputeOptions&);
template BlockDecompositionT<double> block_decomposition<double>(const SymmetricInput&,
                                                                 const PrecomputationT<double>&);
template BlockDecompositionT<long double> block_decomposition<long double>(const SymmetricInput&,
                                                                           const PrecomputationT<long double>&);
template std::vector<double> project_to_simplex<double>(std::vector<double>);
template std::vector<long double> project_to_simplex<long double>(std::vector<long double>);
template double entropy_bits<double>(const MatrixX<double>&);
template long double entropy_bits<long double>(const MatrixX<long double>&);
template double evaluate_ci<double>(const SymmetricInput&, const PrecomputationT<double>&);
template double evaluate_ci<long double>(const SymmetricInput&, const PrecomputationT<long double>&);
template CiReport evaluate_ci_report<double>(const SymmetricInput&, const PrecomputationT<double>&);
template CiReport evaluate_ci_report<long double>(const SymmetricInput&, const PrecomputationT<long double>&);

}  // namespace symcap
