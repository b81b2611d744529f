// SPDX-License-Identifier: Apache-2.0
#pragma once

// Mixed Pauli channels rho -> pI rho + pX XrhoX + pY YrhoY + pZ ZrhoZ.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "symcap/rep_core.hpp"

namespace symcap {

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PauliChannel {
  double p_i = 1.0;
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;

  /// Validates non-negativity and normalization (1e-12).
  static PauliChannel make(double p_i, double p_x, double p_y, double p_z);
  static PauliChannel identity() { return {}; }

  std::array<double, 4> probabilities() const { return {p_i, p_x, p_y, p_z}; }

  friend bool operator==(const PauliChannel&, const PauliChannel&) = default;
};

enum class FamilyKind { depolarizing, independent_xz, two_pauli };

/// Canonical JSON name ("depolarizing", "independent_xz", "two_pauli").
std::string_view family_name(FamilyKind kind);
/// Short CLI name ("dep", "xz", "2pauli").
std::string_view family_short_name(FamilyKind kind);
/// Accepts either the canonical or the short name.
std::optional<FamilyKind> parse_family(std::string_view name);

/// Largest admissible p for the family: 1/3, 1, 1/2.
double family_p_max(FamilyKind kind);

struct ChannelFamily {
  FamilyKind kind = FamilyKind::depolarizing;
  double p = 0.0;

  /// Throws ChannelError when p is outside the family's range.
  PauliChannel channel() const;
};

PauliChannel make_channel(FamilyKind kind, double p);

/// Pauli-twirl combination applied to an arbitrary (non-Hermitian) 2x2
/// operator. Linear in M.
template <class Real>
Matrix2<Real> apply_single(const PauliChannel& ch, const Matrix2<Real>& m) {
  const Real same = static_cast<Real>(ch.p_i + ch.p_z);
  const Real flip = static_cast<Real>(ch.p_x + ch.p_y);
  const Real keep_coh = static_cast<Real>(ch.p_i - ch.p_z);
  const Real swap_coh = static_cast<Real>(ch.p_x - ch.p_y);
  Matrix2<Real> out;
  out(0, 0) = same * m(0, 0) + flip * m(1, 1);
  out(1, 1) = flip * m(0, 0) + same * m(1, 1);
  out(0, 1) = keep_coh * m(0, 1) + swap_coh * m(1, 0);
  out(1, 0) = keep_coh * m(1, 0) + swap_coh * m(0, 1);
  return out;
}

/// Pauli matrices I, X, Y, Z by index 0..3.
const ComplexMatrix2& pauli(int index);

/// Choi state (I (x) N)(Phi+), trace one.
Eigen::Matrix4cd choi(const PauliChannel& ch);

struct KrausOperator {
  int pauli_index = 0;
  double weight = 0.0;
  ComplexMatrix2 op;  // sqrt(weight) * Pauli
};

/// Zero-weight operators are omitted.
std::vector<KrausOperator> kraus_operators(const PauliChannel& ch);

/// Shannon entropy in bits, 0 log 0 = 0.
double shannon_bits(std::span<const double> probs);

/// 1 - H(pI, pX, pY, pZ): single-use coherent information of the maximally
/// mixed qubit.
double hashing_ci(const PauliChannel& ch);

}  // namespace symcap
