// SPDX-License-Identifier: Apache-2.0
#include "symcap/channel.hpp"

#include <cmath>
#include <span>

namespace symcap {

PauliChannel PauliChannel::make(double p_i, double p_x, double p_y, double p_z) {
  for (double p : {p_i, p_x, p_y, p_z}) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ChannelError("pauli channel: probabilities must be non-negative");
  }
  if (std::abs(p_i + p_x + p_y + p_z - 1.0) > 1e-12) throw ChannelError("pauli channel: probabilities must sum to 1");
  return {p_i, p_x, p_y, p_z};
}

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::depolarizing: return "depolarizing";
    case FamilyKind::independent_xz: return "independent_xz";
    case FamilyKind::two_pauli: return "two_pauli";
  }
  return "?";
}

std::string_view family_short_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::depolarizing: return "dep";
    case FamilyKind::independent_xz: return "xz";
    case FamilyKind::two_pauli: return "2pauli";
  }
  return "?";
}

std::optional<FamilyKind> parse_family(std::string_view name) {
  for (FamilyKind k : {FamilyKind::depolarizing, FamilyKind::independent_xz, FamilyKind::two_pauli}) {
    if (name == family_name(k) || name == family_short_name(k)) return k;
  }
  return std::nullopt;
}

double family_p_max(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::depolarizing: return 1.0 / 3.0;
    case FamilyKind::independent_xz: return 1.0;
    case FamilyKind::two_pauli: return 0.5;
  }
  return 0.0;
}

PauliChannel ChannelFamily::channel() const { return make_channel(kind, p); }

PauliChannel make_channel(FamilyKind kind, double p) {
  if (!(p >= 0.0) || p > family_p_max(kind) + 1e-15) {
    throw ChannelError("p=" + std::to_string(p) + " outside the range of the " + std::string(family_name(kind)) +
                       " family [0, " + std::to_string(family_p_max(kind)) + "]");
  }
  switch (kind) {
    case FamilyKind::depolarizing: return {std::max(0.0, 1.0 - 3.0 * p), p, p, p};
    case FamilyKind::independent_xz: return {(1.0 - p) * (1.0 - p), p * (1.0 - p), p * p, p * (1.0 - p)};
    case FamilyKind::two_pauli: return {std::max(0.0, 1.0 - 2.0 * p), p, 0.0, p};
  }
  return {};
}

const ComplexMatrix2& pauli(int index) {
  using C = std::complex<double>;
  static const std::array<ComplexMatrix2, 4> mats = [] {
    std::array<ComplexMatrix2, 4> m;
    m[0] << C(1, 0), C(0, 0), C(0, 0), C(1, 0);
    m[1] << C(0, 0), C(1, 0), C(1, 0), C(0, 0);
    m[2] << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
    m[3] << C(1, 0), C(0, 0), C(0, 0), C(-1, 0);
    return m;
  }();
  return mats.at(static_cast<std::size_t>(index));
}

Eigen::Matrix4cd choi(const PauliChannel& ch) {
  const auto probs = ch.probabilities();
  Eigen::Matrix4cd j = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 4; ++k) {
    if (probs[static_cast<std::size_t>(k)] == 0.0) continue;
    // (I (x) P)|Phi+>, reference first: component (r, o) = P(o, r) / sqrt 2.
    Eigen::Vector4cd v;
    for (int r = 0; r < 2; ++r) {
      for (int o = 0; o < 2; ++o) v(2 * r + o) = pauli(k)(o, r) / std::sqrt(2.0);
    }
    j += probs[static_cast<std::size_t>(k)] * v * v.adjoint();
  }
  return j;
}

std::vector<KrausOperator> kraus_operators(const PauliChannel& ch) {
  std::vector<KrausOperator> ops;
  const auto probs = ch.probabilities();
  for (int k = 0; k < 4; ++k) {
    const double w = probs[static_cast<std::size_t>(k)];
    if (w == 0.0) continue;
    ops.push_back({k, w, std::sqrt(w) * pauli(k)});
  }
  return ops;
}

double shannon_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double hashing_ci(const PauliChannel& ch) {
  const auto probs = ch.probabilities();
  return 1.0 - shannon_bits(probs);
}

}  // namespace symcap
