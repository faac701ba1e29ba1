#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "ggmsim/error.hpp"

namespace ggmsim {

using Complex = std::complex<double>;

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 14;

inline void check_qubit_count(int num_qubits) {
  if (num_qubits < kMinQubits || num_qubits > kMaxQubits) {
    throw ConfigError("qubit count " + std::to_string(num_qubits) + " outside [" +
                      std::to_string(kMinQubits) + ", " + std::to_string(kMaxQubits) + "]");
  }
}

// Qubit k (1-based) lives at bit N-k of the basis index, so qubit 1 is the
// most significant bit and |0...0> is index 0.
inline std::uint32_t qubit_bit(int num_qubits, int qubit) {
  return std::uint32_t{1} << (num_qubits - qubit);
}

/// Dense pure state of N qubits. Owns 2^N amplitudes.
class StateVector {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit StateVector(int num_qubits) : num_qubits_(num_qubits) {
    check_qubit_count(num_qubits);
    amplitudes_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
    amplitudes_(0) = 1.0;
  }

  StateVector(int num_qubits, Eigen::VectorXcd amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    check_qubit_count(num_qubits);
    if (amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
      throw ArgumentError("amplitude array length " + std::to_string(amplitudes_.size()) +
                          " does not match 2^" + std::to_string(num_qubits));
    }
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }
  Complex& operator[](Eigen::Index i) { return amplitudes_(i); }

  double squared_norm() const { return amplitudes_.squaredNorm(); }
  double norm() const { return amplitudes_.norm(); }

  /// Rescales to unit norm; returns the squared norm it had before.
  double normalize() {
    const double sq = squared_norm();
    if (!(sq > 0.0)) throw DegenerateStateError("cannot normalize a zero state");
    amplitudes_ /= std::sqrt(sq);
    return sq;
  }

 private:
  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Computational basis state; `bits[k-1]` is the value of qubit k.
inline StateVector new_basis_state(int num_qubits, std::string_view bits) {
  check_qubit_count(num_qubits);
  if (bits.size() != static_cast<std::size_t>(num_qubits)) {
    throw ArgumentError("bitstring length " + std::to_string(bits.size()) + " != " +
                        std::to_string(num_qubits));
  }
  std::uint32_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ArgumentError("bitstring must contain only 0/1");
    index = (index << 1) | static_cast<std::uint32_t>(c - '0');
  }
  StateVector s(num_qubits);
  s[0] = 0.0;
  s[index] = 1.0;
  return s;
}

/// (|0...0> + |1...1>)/sqrt(2)
inline StateVector ghz_state(int num_qubits) {
  StateVector s(num_qubits);
  const double a = 1.0 / std::sqrt(2.0);
  s[0] = a;
  s[s.dim() - 1] = a;
  return s;
}

/// Equal-weight superposition of all basis states.
inline StateVector uniform_state(int num_qubits) {
  check_qubit_count(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  return StateVector(num_qubits,
                     Eigen::VectorXcd::Constant(dim, Complex(1.0 / std::sqrt(double(dim)), 0.0)));
}

}  // namespace ggmsim
