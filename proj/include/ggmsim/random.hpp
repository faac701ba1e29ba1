#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "ggmsim/error.hpp"
#include "ggmsim/gates.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

/// Seedable random stream keyed by (master_seed, stream_id).
///
/// The generator state is derived only from the key, so a realization draws
/// the same numbers no matter which worker thread runs it or in what order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_seed_(master_seed), stream_id_(stream_id), engine_(make_engine(master_seed, stream_id)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent child stream for a named sub-purpose of this stream.
  RngStream substream(std::uint64_t tag) const {
    return RngStream(mix(master_seed_ ^ 0x9e3779b97f4a7c15ULL, stream_id_), tag);
  }

  /// Standard complex Gaussian: E|z|^2 = 1, real and imaginary parts with variance 1/2.
  Complex complex_gaussian() {
    return {half_normal_(engine_), half_normal_(engine_)};
  }

  double uniform01() { return unit_(engine_); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  bool coin() { return std::bernoulli_distribution(0.5)(engine_); }

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over the combined key
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32),
                      0x6767u};
    return std::mt19937_64(seq);
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> half_normal_{0.0, std::sqrt(0.5)};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// D x D matrix of independent standard complex Gaussians.
inline Eigen::MatrixXcd ginibre_matrix(RngStream& rng, int dim) {
  if (dim < 1) throw ArgumentError("ginibre dimension must be >= 1");
  Eigen::MatrixXcd m(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) m(r, c) = rng.complex_gaussian();
  return m;
}

/// Haar-distributed unitary of any dimension: QR of a Ginibre matrix with the
/// columns rephased so that R has a positive real diagonal.
inline Eigen::MatrixXcd haar_unitary_matrix(RngStream& rng, int dim) {
  const Eigen::MatrixXcd z = ginibre_matrix(rng, dim);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    q.col(c) *= (mag > 0.0 ? d / mag : Complex(1.0, 0.0));
  }
  return q;
}

/// Haar-random gate for dim 2 (one qubit) or 4 (two qubits).
inline GateMatrix haar_unitary(RngStream& rng, int dim) {
  if (dim != 2 && dim != 4) {
    throw ArgumentError("haar gate dimension must be 2 or 4, got " + std::to_string(dim));
  }
  return GateMatrix(haar_unitary_matrix(rng, dim));
}

/// Haar-random pure state (normalized complex Gaussian vector).
inline StateVector haar_state(RngStream& rng, int num_qubits) {
  check_qubit_count(num_qubits);
  Eigen::VectorXcd v(Eigen::Index{1} << num_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_gaussian();
  StateVector s(num_qubits, std::move(v));
  s.normalize();
  return s;
}

enum class CliffordKind { Hadamard, S, CNOT };

/// One gate of the random Clifford circuit placed on a bond (a, b).
/// For CNOT, `on_first` means a is the control; for H and S it means a is the target.
struct CliffordGateTag {
  CliffordKind kind;
  bool on_first;
};

inline CliffordGateTag random_clifford_gate(RngStream& rng) {
  const int k = rng.uniform_int(0, 2);
  const bool first = rng.coin();
  return {static_cast<CliffordKind>(k), first};
}

/// Applies a Clifford tag across the bond (a, b).
inline void apply_clifford(StateVector& state, int a, int b, const CliffordGateTag& tag) {
  static const GateMatrix h = gates::hadamard();
  static const GateMatrix s = gates::phase_s();
  static const GateMatrix cx = gates::cnot();
  switch (tag.kind) {
    case CliffordKind::Hadamard:
      apply_one_qubit(state, tag.on_first ? a : b, h);
      break;
    case CliffordKind::S:
      apply_one_qubit(state, tag.on_first ? a : b, s);
      break;
    case CliffordKind::CNOT:
      if (tag.on_first)
        apply_two_qubit(state, a, b, cx);
      else
        apply_two_qubit(state, b, a, cx);
      break;
  }
}

}  // namespace ggmsim
