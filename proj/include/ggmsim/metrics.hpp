#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ggmsim/error.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

/// One A:B cut of the qubits, stored as the qubit set A (bit k-1 marks qubit k).
/// Canonical masks contain qubit 1, which removes the A <-> B duplicate.
class BipartitionMask {
 public:
  BipartitionMask(int num_qubits, std::uint32_t qubit_set) : num_qubits_(num_qubits), set_(qubit_set) {
    const std::uint32_t full = full_set(num_qubits);
    if ((set_ & ~full) != 0) throw ArgumentError("mask names qubits beyond N");
    if (set_ == 0 || set_ == full) throw ArgumentError("bipartition must be nonempty and proper");
  }

  static BipartitionMask from_qubits(int num_qubits, std::initializer_list<int> qubits) {
    std::uint32_t s = 0;
    for (int q : qubits) {
      if (q < 1 || q > num_qubits) throw ArgumentError("qubit label out of range");
      s |= std::uint32_t{1} << (q - 1);
    }
    return {num_qubits, s};
  }

  int num_qubits() const { return num_qubits_; }
  std::uint32_t qubit_set() const { return set_; }
  int size() const { return std::popcount(set_); }
  bool contains(int qubit) const { return (set_ >> (qubit - 1)) & 1u; }
  bool is_canonical() const { return contains(1); }

  BipartitionMask complement() const { return {num_qubits_, full_set(num_qubits_) & ~set_}; }
  BipartitionMask canonical() const { return is_canonical() ? *this : complement(); }

  /// Bits of the basis index owned by the qubits in A.
  std::uint32_t index_bits() const {
    std::uint32_t bits = 0;
    for (int q = 1; q <= num_qubits_; ++q)
      if (contains(q)) bits |= qubit_bit(num_qubits_, q);
    return bits;
  }

  friend bool operator==(const BipartitionMask&, const BipartitionMask&) = default;

 private:
  static std::uint32_t full_set(int n) { return (std::uint32_t{1} << n) - 1; }

  int num_qubits_;
  std::uint32_t set_;
};

/// All 2^(N-1) - 1 canonical cuts.
inline std::vector<BipartitionMask> enumerate_bipartitions(int num_qubits) {
  if (num_qubits < 2 || num_qubits > 31) throw ArgumentError("bipartitions need 2 <= N <= 31");
  std::vector<BipartitionMask> out;
  const std::uint32_t others = (std::uint32_t{1} << (num_qubits - 1)) - 1;
  out.reserve(others);
  for (std::uint32_t rest = 0; rest < others; ++rest) {
    out.emplace_back(num_qubits, 1u | (rest << 1));
  }
  return out;
}

inline constexpr double kNormCheckTolerance = 1e-8;

inline void require_normalized(const StateVector& s) {
  const double dev = std::abs(s.norm() - 1.0);
  if (!(dev <= kNormCheckTolerance)) {
    throw ContractError("state norm deviates from 1 by " + std::to_string(dev));
  }
}

// ---------------------------------------------------------------------------
// Dominant eigenvalue of a Hermitian positive semidefinite matrix.

struct PowerOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 10000;
  /// Known lower bound on the answer the caller cares about. A converged value
  /// whose complement to the trace cannot beat it is accepted without a restart.
  double floor = 0.0;
};

struct PowerResult {
  double value = 0.0;
  int iterations = 0;
  int restarts = 0;
  bool converged = false;
};

namespace detail {

inline PowerResult power_run(const Eigen::MatrixXcd& h, Eigen::VectorXcd v, const PowerOptions& opt) {
  PowerResult res;
  v.normalize();
  Eigen::VectorXcd w(v.size());
  double mu_prev = 0.0;
  double delta_prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    w.noalias() = h * v;
    const double mu = v.dot(w).real();
    const double nw = w.norm();
    res.iterations = it;
    res.value = std::max(res.value, mu);
    if (nw == 0.0) {
      res.converged = true;
      return res;
    }
    v = w / nw;
    if (it > 1) {
      // Rayleigh quotients of a PSD matrix increase monotonically; once the
      // increments shrink geometrically the remaining tail is delta*q/(1-q).
      const double delta = mu - mu_prev;
      const double scale = std::abs(mu);
      if (delta <= 16.0 * std::numeric_limits<double>::epsilon() * scale) {
        res.converged = true;
        return res;
      }
      if (delta > 0.0 && delta <= opt.relative_tolerance * scale && delta_prev > 0.0) {
        const double q = delta / delta_prev;
        if (q < 1.0 && delta * q / (1.0 - q) <= opt.relative_tolerance * scale) {
          res.converged = true;
          return res;
        }
      }
      delta_prev = delta;
    }
    mu_prev = mu;
  }
  return res;
}

inline Eigen::VectorXcd perturbed_start(Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(1.0 + 0.5 * std::cos(1.7 * double(i + 1)), 0.25 * std::sin(0.9 * double(i + 3)));
  }
  return v;
}

}  // namespace detail

/// Power iteration from the all-ones vector on a Hermitian PSD matrix.
///
/// A second pass from a fixed perturbed start runs when the first pass hits
/// the iteration cap, or when the rest of the spectrum could still hold an
/// eigenvalue above both the converged value and `opt.floor` (the start vector
/// may have been orthogonal to the true top eigenvector). Any other eigenvalue
/// is bounded by both trace - mu and sqrt(|H|_F^2 - mu^2).
inline PowerResult dominant_eigenvalue(const Eigen::MatrixXcd& h, const PowerOptions& opt = {}) {
  const Eigen::Index n = h.rows();
  PowerResult res = detail::power_run(h, Eigen::VectorXcd::Ones(n), opt);
  const double mu = res.value;
  const double other = std::min(h.trace().real() - mu, std::sqrt(std::max(0.0, h.squaredNorm() - mu * mu)));
  const bool could_hide = other > mu * (1.0 + 1e-12) && other > opt.floor;
  if (n > 1 && (!res.converged || could_hide)) {
    PowerResult again = detail::power_run(h, detail::perturbed_start(n), opt);
    again.iterations += res.iterations;
    again.restarts = res.restarts + 1;
    again.value = std::max(again.value, res.value);
    again.converged = again.converged || res.converged;
    return again;
  }
  return res;
}

/// Top eigenvalue of the reduced state G / tr G, for a Gram matrix G of a cut.
/// When the rest of the spectrum (tr G - lambda) is below the rounding level
/// of the trace the cut is a product to working precision and 1 is returned.
/// `floor` is in the same normalized units.
inline double reduced_top_eigenvalue(const Eigen::MatrixXcd& g, PowerOptions opt = {}) {
  const double tr = g.trace().real();
  if (!(tr > 0.0)) return 0.0;
  opt.floor *= tr;
  const double lam = dominant_eigenvalue(g, opt).value;
  if (tr - lam <= 8.0 * std::numeric_limits<double>::epsilon() * tr) return 1.0;
  return lam / tr;
}

// ---------------------------------------------------------------------------
// Reshaping a state across a cut.

namespace detail {

/// All submasks of `mask` in increasing numeric order; entry r is the
/// deposit of r's bits onto the positions of `mask`.
inline void subset_offsets(std::uint32_t mask, std::vector<std::uint32_t>& out) {
  out.clear();
  out.reserve(std::size_t{1} << std::popcount(mask));
  std::uint32_t x = 0;
  do {
    out.push_back(x);
    x = (x - mask) & mask;
  } while (x != 0);
}

}  // namespace detail

/// Reusable buffers for reshaping amplitudes into a rows x cols matrix.
class CutReshaper {
 public:
  /// M(r, c) = psi[row_offset[r] | col_offset[c] | fixed_bits]
  void gather(const StateVector& state, std::uint32_t row_bits, std::uint32_t col_bits,
              std::uint32_t fixed_bits, Eigen::MatrixXcd& out) {
    detail::subset_offsets(row_bits, rows_);
    detail::subset_offsets(col_bits, cols_);
    const Eigen::Index nr = static_cast<Eigen::Index>(rows_.size());
    const Eigen::Index nc = static_cast<Eigen::Index>(cols_.size());
    out.resize(nr, nc);
    const Complex* amp = state.amplitudes().data();
    for (Eigen::Index c = 0; c < nc; ++c) {
      const std::uint32_t cbase = cols_[c] | fixed_bits;
      Complex* dst = out.col(c).data();
      for (Eigen::Index r = 0; r < nr; ++r) dst[r] = amp[rows_[r] | cbase];
    }
  }

  const std::vector<std::uint32_t>& row_offsets() const { return rows_; }

 private:
  std::vector<std::uint32_t> rows_;
  std::vector<std::uint32_t> cols_;
};

/// Index bits of the side of `mask` with fewer qubits (A on ties).
inline std::uint32_t smaller_side_bits(const BipartitionMask& mask) {
  const std::uint32_t all = (std::uint32_t{1} << mask.num_qubits()) - 1;
  const std::uint32_t a = mask.index_bits();
  return (2 * mask.size() <= mask.num_qubits()) ? a : (all & ~a);
}

/// Lower triangle of M M^dagger written into `gram`, upper mirrored.
inline void gram_of(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& gram) {
  gram.setZero(m.rows(), m.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(m);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.adjoint();
}

inline double frobenius_sq_hermitian(const Eigen::MatrixXcd& h) { return h.squaredNorm(); }

/// Largest eigenvalue of rho_A (equivalently of rho_B): power iteration on the
/// Gram matrix of the smaller side of the reshaped amplitudes.
inline double max_schmidt_sq(const StateVector& state, const BipartitionMask& mask,
                             const PowerOptions& opt = {}) {
  require_normalized(state);
  if (mask.num_qubits() != state.num_qubits()) throw ArgumentError("mask/state qubit count mismatch");
  const std::uint32_t all = static_cast<std::uint32_t>(state.dim()) - 1;
  const std::uint32_t rows = smaller_side_bits(mask);
  CutReshaper reshaper;
  Eigen::MatrixXcd m, g;
  reshaper.gather(state, rows, all & ~rows, 0, m);
  gram_of(m, g);
  return reduced_top_eigenvalue(g, opt);
}

// ---------------------------------------------------------------------------
// Dense oracle: explicit partial trace and full eigendecomposition.

/// rho over the qubits of `mask`; row index bit (|A|-1-p) is the p-th qubit of A
/// in ascending label order.
inline Eigen::MatrixXcd reduced_density_matrix(const StateVector& state, const BipartitionMask& mask) {
  const int n = state.num_qubits();
  std::vector<int> in_a, in_b;
  for (int q = 1; q <= n; ++q) (mask.contains(q) ? in_a : in_b).push_back(q);
  const int ka = static_cast<int>(in_a.size());
  const int kb = static_cast<int>(in_b.size());
  auto compose = [&](std::uint32_t a, std::uint32_t b) {
    std::uint32_t index = 0;
    for (int p = 0; p < ka; ++p)
      if ((a >> (ka - 1 - p)) & 1u) index |= qubit_bit(n, in_a[p]);
    for (int p = 0; p < kb; ++p)
      if ((b >> (kb - 1 - p)) & 1u) index |= qubit_bit(n, in_b[p]);
    return index;
  };
  const std::uint32_t da = std::uint32_t{1} << ka;
  const std::uint32_t db = std::uint32_t{1} << kb;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  for (std::uint32_t a = 0; a < da; ++a)
    for (std::uint32_t a2 = 0; a2 < da; ++a2) {
      Complex acc = 0.0;
      for (std::uint32_t b = 0; b < db; ++b) acc += state[compose(a, b)] * std::conj(state[compose(a2, b)]);
      rho(a, a2) = acc;
    }
  return rho;
}

/// Largest eigenvalue of rho on the smaller side, via full eigendecomposition.
inline double max_schmidt_sq_dense(const StateVector& state, const BipartitionMask& mask) {
  require_normalized(state);
  const BipartitionMask side = (2 * mask.size() <= mask.num_qubits()) ? mask : mask.complement();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(reduced_density_matrix(state, side),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

// ---------------------------------------------------------------------------
// Generalized geometric measure.

struct GgmOptions {
  /// 0 means every cut. A positive value restricts the search to cuts whose
  /// smaller side has at most this many qubits; profiling only, the result is
  /// then only a lower bound on the maximum overlap.
  int max_part_size = 0;
  PowerOptions power{};
};

namespace detail {

/// Canonical cuts sorted by the size of their smaller side, stable otherwise.
inline std::vector<BipartitionMask> cuts_by_smaller_side(int num_qubits, int max_part_size) {
  std::vector<BipartitionMask> cuts = enumerate_bipartitions(num_qubits);
  auto small = [num_qubits](const BipartitionMask& m) { return std::min(m.size(), num_qubits - m.size()); };
  std::stable_sort(cuts.begin(), cuts.end(),
                   [&](const BipartitionMask& a, const BipartitionMask& b) { return small(a) < small(b); });
  if (max_part_size > 0) {
    std::erase_if(cuts, [&](const BipartitionMask& m) { return small(m) > max_part_size; });
  }
  return cuts;
}

}  // namespace detail

/// max over all canonical cuts of the largest reduced-state eigenvalue.
///
/// Cuts are visited smallest side first; a cut is skipped when the Frobenius
/// norm of its Gram matrix (an upper bound on the top eigenvalue) cannot beat
/// the best value found so far. The skip never changes the result.
inline double max_overlap(const StateVector& state, const GgmOptions& opt = {}) {
  require_normalized(state);
  const int n = state.num_qubits();
  const std::uint32_t all = static_cast<std::uint32_t>(state.dim()) - 1;
  CutReshaper reshaper;
  Eigen::MatrixXcd m, g;
  double best = 0.0;
  for (const auto& cut : detail::cuts_by_smaller_side(n, opt.max_part_size)) {
    const std::uint32_t rows = smaller_side_bits(cut);
    reshaper.gather(state, rows, all & ~rows, 0, m);
    gram_of(m, g);
    if (std::sqrt(frobenius_sq_hermitian(g)) <= best * g.trace().real()) continue;
    PowerOptions p = opt.power;
    p.floor = best;
    best = std::max(best, reduced_top_eigenvalue(g, p));
  }
  return best;
}

/// 1 - overlap, with the overlap held to [1/2, 1]. A single-qubit cut always
/// has lambda_max >= 1/2 and no reduced state exceeds its unit trace, so the
/// clamp only removes rounding: a product state comes out as exactly 0.
inline double ggm_from_overlap(double overlap) { return 1.0 - std::clamp(overlap, 0.5, 1.0); }

/// 1 - max_{A:B} lambda_max(rho_A); in [0, 0.5] for qubits.
inline double ggm(const StateVector& state, const GgmOptions& opt = {}) {
  return ggm_from_overlap(max_overlap(state, opt));
}

/// Brute-force GGM: dense eigendecomposition on every cut.
inline double ggm_dense(const StateVector& state) {
  double best = 0.0;
  for (const auto& cut : enumerate_bipartitions(state.num_qubits()))
    best = std::max(best, max_schmidt_sq_dense(state, cut));
  return ggm_from_overlap(best);
}

/// Inverse participation ratio in the computational basis, 1 / sum |c_i|^4.
inline double ipr(const StateVector& state) {
  double s = 0.0;
  for (const Complex& c : state.amplitudes()) {
    const double p = std::norm(c);
    s += p * p;
  }
  return 1.0 / s;
}

}  // namespace ggmsim
