// SPDX-License-Identifier: Apache-2.0
#include "symcap/basis.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "symcap/rep_core.hpp"

namespace symcap {

QubitState QubitState::from_bloch(double theta, double phi) {
  return {std::complex<double>(std::cos(theta / 2), 0.0), std::polar(std::sin(theta / 2), phi)};
}

Eigen::Vector3d QubitState::bloch() const {
  const std::complex<double> coh = std::conj(c0) * c1;
  return {2 * coh.real(), 2 * coh.imag(), std::norm(c0) - std::norm(c1)};
}

std::complex<double> dicke_overlap(int n, int k, const QubitState& phi) {
  if (n < 0 || k < 0 || k > n) throw DomainError("dicke_overlap: k out of range");
  const double root = std::sqrt(static_cast<double>(binomial(n, k)));
  std::complex<double> v{root, 0.0};
  for (int e = 0; e < n - k; ++e) v *= phi.c0;
  for (int e = 0; e < k; ++e) v *= phi.c1;
  return v;
}

double condition_number(const Eigen::MatrixXcd& overlap) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(1.0, s(0) / smin);
}

Eigen::MatrixXcd expansion_coefficients(const SpanningBasis& basis) {
  const auto& a = basis.overlap;
  const Eigen::Index dim = a.rows();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  if (qr.rank() < dim) throw BasisError("expansion_coefficients: spanning states are linearly dependent");
  // beta * A^T = I  <=>  A * beta^T = I
  const Eigen::MatrixXcd x = qr.solve(Eigen::MatrixXcd::Identity(dim, dim));
  return x.transpose();
}

SpanningBasis make_spanning_basis(int n, std::vector<QubitState> states, std::uint64_t seed) {
  if (n < 1) throw DomainError("spanning basis: n must be at least 1");
  if (n > kMaxIrrepN) throw DomainError("spanning basis: n exceeds supported range");
  if (static_cast<int>(states.size()) != n + 1) throw DomainError("spanning basis: need exactly n+1 states");
  SpanningBasis b;
  b.n = n;
  b.seed = seed;
  b.states = std::move(states);
  b.overlap.resize(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j <= n; ++j) b.overlap(k, j) = dicke_overlap(n, k, b.states[static_cast<std::size_t>(j)]);
  }
  b.condition_number = condition_number(b.overlap);
  if (!std::isfinite(b.condition_number)) throw BasisError("spanning basis: singular overlap matrix");
  b.beta = expansion_coefficients(b);
  return b;
}

namespace {

std::vector<Eigen::Vector3d> fibonacci_sphere(int count) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * i;
    pts.emplace_back(r * std::cos(t), r * std::sin(t), z);
  }
  return pts;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Pairwise repulsion with a steep potential; approximately maximizes the
// minimum angular separation, i.e. minimizes the largest |<phi_i|phi_j>|^2.
void polish(std::vector<Eigen::Vector3d>& pts, int iterations) {
  const std::size_t m = pts.size();
  if (m < 3) return;
  const double step0 = 0.1 / std::sqrt(static_cast<double>(m));
  std::vector<Eigen::Vector3d> force(m);
  for (int it = 0; it < iterations; ++it) {
    for (auto& f : force) f.setZero();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const Eigen::Vector3d d = pts[i] - pts[j];
        const double r2 = std::max(d.squaredNorm(), 1e-12);
        const Eigen::Vector3d f = d / (r2 * r2 * r2);  // ~ 1/r^5 along d
        force[i] += f;
        force[j] -= f;
      }
    }
    double fmax = 0.0;
    for (auto& f : force) fmax = std::max(fmax, f.norm());
    if (fmax == 0.0) return;
    const double step = step0 * (1.0 - static_cast<double>(it) / iterations) / fmax;
    for (std::size_t i = 0; i < m; ++i) {
      Eigen::Vector3d f = force[i] - force[i].dot(pts[i]) * pts[i];
      pts[i] = (pts[i] + step * f).normalized();
    }
  }
}

QubitState from_bloch_vector(const Eigen::Vector3d& v) {
  const double theta = std::acos(std::clamp(v.z(), -1.0, 1.0));
  const double phi = std::atan2(v.y(), v.x());
  return QubitState::from_bloch(theta, phi);
}

}  // namespace

SpanningBasis choose_spanning_states(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("choose_spanning_states: n must be at least 1");
  double best_cond = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= kSpanningRetries; ++attempt) {
    std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    auto pts = fibonacci_sphere(n + 1);
    const Eigen::Matrix3d rot = random_rotation(rng);
    for (auto& p : pts) p = rot * p;
    polish(pts, 200);
    std::vector<QubitState> states;
    states.reserve(pts.size());
    for (const auto& p : pts) states.push_back(from_bloch_vector(p));
    try {
      SpanningBasis b = make_spanning_basis(n, std::move(states), seed);
      if (b.condition_number <= kMaxConditionNumber) return b;
      best_cond = std::min(best_cond, b.condition_number);
    } catch (const BasisError&) {
    }
  }
  throw BasisError("choose_spanning_states: condition number " + std::to_string(best_cond) +
                   " above ceiling after retries (n=" + std::to_string(n) + ")");
}

}  // namespace symcap
