#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "ggmsim/error.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

inline constexpr double kUnitarityTolerance = 1e-12;

/// A 2x2 or 4x4 operator. Gates tagged unitary are checked on construction;
/// untagged ones (measurement operators, raw Ginibre draws) are not.
///
/// Two-qubit gates are indexed by b = 2*b_i + b_j, where b_i and b_j are the
/// bits of the first and second site passed to apply_two_qubit.
class GateMatrix {
 public:
  enum class Tag { Unitary, General };

  GateMatrix(Eigen::MatrixXcd entries, Tag tag = Tag::Unitary)
      : entries_(std::move(entries)), tag_(tag) {
    if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 4)) {
      throw ArgumentError("gate must be 2x2 or 4x4, got " + std::to_string(entries_.rows()) + "x" +
                          std::to_string(entries_.cols()));
    }
    if (tag_ == Tag::Unitary && unitarity_defect() > kUnitarityTolerance) {
      throw ArgumentError("gate tagged unitary fails U^dagger U = I (defect " +
                          std::to_string(unitarity_defect()) + ")");
    }
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  bool is_unitary_tagged() const { return tag_ == Tag::Unitary; }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Complex operator()(int r, int c) const { return entries_(r, c); }

  /// max |(G^dagger G - I)_ab|
  double unitarity_defect() const {
    const Eigen::MatrixXcd d =
        entries_.adjoint() * entries_ - Eigen::MatrixXcd::Identity(entries_.rows(), entries_.cols());
    return d.cwiseAbs().maxCoeff();
  }

  GateMatrix adjoint() const { return GateMatrix(entries_.adjoint(), tag_); }

 private:
  Eigen::MatrixXcd entries_;
  Tag tag_;
};

namespace gates {

inline GateMatrix identity(int dim) { return GateMatrix(Eigen::MatrixXcd::Identity(dim, dim)); }

inline GateMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << h, h, h, -h;
  return GateMatrix(m);
}

/// diag(1, e^{i pi/2})
inline GateMatrix phase_s() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, Complex(0.0, 1.0);
  return GateMatrix(m);
}

inline GateMatrix pauli_z() {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, -1.0;
  return GateMatrix(m);
}

/// Control on the first site, target on the second.
inline GateMatrix cnot() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return GateMatrix(m);
}

inline GateMatrix swap() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return GateMatrix(m);
}

}  // namespace gates

enum class Normalize { No, Yes };

namespace detail {

// Spreads the bits of `k` over the positions not covered by `lo_bit`/`hi_bit`
// (both single-bit masks, lo_bit < hi_bit).
inline std::uint32_t insert_two_zero_bits(std::uint32_t k, std::uint32_t lo_bit, std::uint32_t hi_bit) {
  const std::uint32_t lo_mask = lo_bit - 1;
  k = ((k & ~lo_mask) << 1) | (k & lo_mask);
  const std::uint32_t hi_mask = hi_bit - 1;
  return ((k & ~hi_mask) << 1) | (k & hi_mask);
}

inline std::uint32_t insert_zero_bit(std::uint32_t k, std::uint32_t bit) {
  const std::uint32_t mask = bit - 1;
  return ((k & ~mask) << 1) | (k & mask);
}

inline void check_site(const StateVector& s, int site) {
  if (site < 1 || site > s.num_qubits()) {
    throw ArgumentError("site " + std::to_string(site) + " out of range 1.." +
                        std::to_string(s.num_qubits()));
  }
}

inline double finish(StateVector& s, Normalize renormalize) {
  if (renormalize == Normalize::Yes) return s.normalize();
  return s.squared_norm();
}

}  // namespace detail

/// Applies a 4x4 gate to sites (site_i, site_j) in place.
/// Returns the squared norm of the result before any renormalization, which
/// is the Born weight when the gate is a measurement operator.
inline double apply_two_qubit(StateVector& state, int site_i, int site_j, const GateMatrix& gate,
                              Normalize renormalize = Normalize::No) {
  detail::check_site(state, site_i);
  detail::check_site(state, site_j);
  if (site_i == site_j) throw ArgumentError("two-qubit gate on a single site");
  if (gate.dim() != 4) throw ArgumentError("apply_two_qubit needs a 4x4 gate");

  // Canonical orientation (lower-numbered site first) so that (i, j, G) and
  // (j, i, SWAP G SWAP) run the identical arithmetic.
  const bool flip = site_i > site_j;
  if (flip) std::swap(site_i, site_j);
  static constexpr int kSwapIndex[4] = {0, 2, 1, 3};
  std::array<Complex, 16> g;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) g[r * 4 + c] = flip ? gate(kSwapIndex[r], kSwapIndex[c]) : gate(r, c);

  const int n = state.num_qubits();
  const std::uint32_t bi = qubit_bit(n, site_i);
  const std::uint32_t bj = qubit_bit(n, site_j);
  const std::uint32_t lo = bj;
  const std::uint32_t hi = bi;

  Complex* amp = state.amplitudes().data();
  const std::uint32_t groups = static_cast<std::uint32_t>(state.dim()) >> 2;
  for (std::uint32_t k = 0; k < groups; ++k) {
    const std::uint32_t base = detail::insert_two_zero_bits(k, lo, hi);
    const std::uint32_t idx[4] = {base, base | bj, base | bi, base | bi | bj};
    const Complex in[4] = {amp[idx[0]], amp[idx[1]], amp[idx[2]], amp[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amp[idx[r]] = g[r * 4 + 0] * in[0] + g[r * 4 + 1] * in[1] + g[r * 4 + 2] * in[2] +
                    g[r * 4 + 3] * in[3];
    }
  }
  return detail::finish(state, renormalize);
}

/// Applies a 2x2 gate to `site` in place; same return convention as apply_two_qubit.
inline double apply_one_qubit(StateVector& state, int site, const GateMatrix& gate,
                              Normalize renormalize = Normalize::No) {
  detail::check_site(state, site);
  if (gate.dim() != 2) throw ArgumentError("apply_one_qubit needs a 2x2 gate");

  const std::uint32_t b = qubit_bit(state.num_qubits(), site);
  const Complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
  Complex* amp = state.amplitudes().data();
  const std::uint32_t pairs = static_cast<std::uint32_t>(state.dim()) >> 1;
  for (std::uint32_t k = 0; k < pairs; ++k) {
    const std::uint32_t i0 = detail::insert_zero_bit(k, b);
    const std::uint32_t i1 = i0 | b;
    const Complex a0 = amp[i0], a1 = amp[i1];
    amp[i0] = g00 * a0 + g01 * a1;
    amp[i1] = g10 * a0 + g11 * a1;
  }
  return detail::finish(state, renormalize);
}

}  // namespace ggmsim
