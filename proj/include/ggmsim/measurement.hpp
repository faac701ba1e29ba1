#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ggmsim/circuits.hpp"
#include "ggmsim/error.hpp"
#include "ggmsim/gates.hpp"
#include "ggmsim/metrics.hpp"
#include "ggmsim/random.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

/// Measurement branch with zero Born probability (projective limit on an eigenstate).
class ExcludedBranchError : public DegenerateStateError {
 public:
  using DegenerateStateError::DegenerateStateError;
};

enum class Outcome { Plus, Minus };

/// M_+/- = (I +/- lambda sigma_z) / sqrt(2 (1 + lambda^2)), lambda in (0, 1].
class WeakMeasurementPair {
 public:
  explicit WeakMeasurementPair(double lambda)
      : lambda_(check(lambda)), plus_(make(lambda, +1.0)), minus_(make(lambda, -1.0)) {}

  double lambda() const { return lambda_; }
  const GateMatrix& plus() const { return plus_; }
  const GateMatrix& minus() const { return minus_; }
  const GateMatrix& op(Outcome o) const { return o == Outcome::Plus ? plus_ : minus_; }

  /// Diagonal entry of M for the given outcome and qubit value.
  double weight(Outcome o, int bit) const { return diag(lambda_, o == Outcome::Plus ? 1.0 : -1.0, bit); }

  /// max |(M+^dagger M+ + M-^dagger M- - I)_ab|
  double completeness_defect() const {
    const Eigen::MatrixXcd sum = plus_.entries().adjoint() * plus_.entries() +
                                 minus_.entries().adjoint() * minus_.entries() -
                                 Eigen::MatrixXcd::Identity(2, 2);
    return sum.cwiseAbs().maxCoeff();
  }

 private:
  static double check(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) {
      throw ArgumentError("measurement strength must lie in (0, 1], got " + std::to_string(lambda));
    }
    return lambda;
  }

  static double diag(double lambda, double sign, int bit) {
    const double z = bit == 0 ? 1.0 : -1.0;
    return (1.0 + sign * lambda * z) / std::sqrt(2.0 * (1.0 + lambda * lambda));
  }

  static GateMatrix make(double lambda, double sign) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = diag(lambda, sign, 0);
    m(1, 1) = diag(lambda, sign, 1);
    return GateMatrix(m, GateMatrix::Tag::General);
  }

  double lambda_;
  GateMatrix plus_;
  GateMatrix minus_;
};

struct MeasuredState {
  StateVector state;
  double probability;
};

/// Post-measurement state M|psi>/||M|psi>|| and its Born probability ||M|psi>||^2.
inline MeasuredState apply_weak_measurement(const StateVector& state, int site, const WeakMeasurementPair& pair,
                                            Outcome outcome) {
  require_normalized(state);
  StateVector out = state;
  const double p = apply_one_qubit(out, site, pair.op(outcome), Normalize::No);
  if (!(p > 0.0)) throw ExcludedBranchError("measurement branch has zero probability");
  out.normalize();
  return {std::move(out), p};
}

/// (1 - lambda)^2 / (2 (1 + lambda^2)): GGM of a GHZ state after one weak measurement.
inline double analytic_ghz_decay(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ArgumentError("lambda must lie in [0, 1]");
  return (1.0 - lambda) * (1.0 - lambda) / (2.0 * (1.0 + lambda * lambda));
}

/// Strength grid 0.05, 0.10, ..., 1.00.
inline std::vector<double> default_lambda_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 20; ++k) g.push_back(k / 20.0);
  return g;
}

/// GGM of both measurement branches at one site.
struct BranchGgm {
  double lambda = 0.0;
  double p_plus = 0.0;
  double p_minus = 0.0;
  double ggm_plus = 0.0;   ///< NaN when the branch is excluded
  double ggm_minus = 0.0;  ///< NaN when the branch is excluded

  /// p+ G+ + p- G-, excluded branches contributing zero.
  double weighted() const {
    double s = 0.0;
    if (p_plus > 0.0) s += p_plus * ggm_plus;
    if (p_minus > 0.0) s += p_minus * ggm_minus;
    return s;
  }
};

/// Both-branch GGM after measuring `site`, for every strength in `lambdas`.
///
/// Measuring one qubit only rescales the reshaped amplitudes, so the Gram
/// matrix of each cut is formed once and every (lambda, outcome) post-state
/// reuses it: if the site is on the Gram side the post-state Gram is D G D/p,
/// otherwise it is (w0 G0 + w1 G1)/p with G_x the Gram restricted to site
/// value x. Cut pruning follows max_overlap, per branch.
inline std::vector<BranchGgm> weak_branch_ggm(const StateVector& state, int site,
                                              const std::vector<double>& lambdas,
                                              const PowerOptions& power = {}) {
  require_normalized(state);
  if (site < 1 || site > state.num_qubits()) throw ArgumentError("measurement site out of range");
  const int n = state.num_qubits();
  const std::uint32_t all = static_cast<std::uint32_t>(state.dim()) - 1;
  const std::uint32_t sbit = qubit_bit(n, site);

  double prob1 = 0.0;
  for (Eigen::Index i = 0; i < state.dim(); ++i)
    if (static_cast<std::uint32_t>(i) & sbit) prob1 += std::norm(state[i]);
  const double prob0 = std::max(0.0, state.squared_norm() - prob1);

  struct Branch {
    double k0, k1, p, best;
  };
  std::vector<Branch> branches;
  std::vector<BranchGgm> out;
  for (double lambda : lambdas) {
    WeakMeasurementPair pair(lambda);
    BranchGgm r;
    r.lambda = lambda;
    for (Outcome o : {Outcome::Plus, Outcome::Minus}) {
      const double k0 = pair.weight(o, 0), k1 = pair.weight(o, 1);
      const double p = k0 * k0 * prob0 + k1 * k1 * prob1;
      branches.push_back({k0, k1, p, 0.0});
      (o == Outcome::Plus ? r.p_plus : r.p_minus) = p;
    }
    out.push_back(r);
  }

  CutReshaper reshaper;
  Eigen::MatrixXcd m, g, g1, h;
  for (const auto& cut : detail::cuts_by_smaller_side(n, 0)) {
    const std::uint32_t rows = smaller_side_bits(cut);
    if (rows & sbit) {
      reshaper.gather(state, rows, all & ~rows, 0, m);
      gram_of(m, g);
      const auto& offs = reshaper.row_offsets();
      const Eigen::Index dim = g.rows();
      std::vector<int> bit(static_cast<std::size_t>(dim));
      for (Eigen::Index a = 0; a < dim; ++a) bit[a] = (offs[a] & sbit) ? 1 : 0;
      double blocks[2][2] = {{0, 0}, {0, 0}};
      for (Eigen::Index b = 0; b < dim; ++b)
        for (Eigen::Index a = 0; a < dim; ++a) blocks[bit[a]][bit[b]] += std::norm(g(a, b));
      for (auto& br : branches) {
        if (!(br.p > 0.0)) continue;
        const double w0 = br.k0 * br.k0, w1 = br.k1 * br.k1;
        const double f2 = (w0 * w0 * blocks[0][0] + w0 * w1 * (blocks[0][1] + blocks[1][0]) + w1 * w1 * blocks[1][1]) /
                          (br.p * br.p);
        if (std::sqrt(f2) <= br.best) continue;
        Eigen::VectorXd d(dim);
        for (Eigen::Index a = 0; a < dim; ++a) d(a) = bit[a] ? br.k1 : br.k0;
        h = d.asDiagonal() * g * d.asDiagonal();
        h /= br.p;
        PowerOptions p = power;
        p.floor = br.best;
        br.best = std::max(br.best, reduced_top_eigenvalue(h, p));
      }
    } else {
      const std::uint32_t cols = all & ~rows & ~sbit;
      reshaper.gather(state, rows, cols, 0, m);
      gram_of(m, g);
      reshaper.gather(state, rows, cols, sbit, m);
      gram_of(m, g1);
      const double f00 = g.squaredNorm();
      const double f11 = g1.squaredNorm();
      const double f01 = (g.array() * g1.array().conjugate()).real().sum();
      for (auto& br : branches) {
        if (!(br.p > 0.0)) continue;
        const double w0 = br.k0 * br.k0, w1 = br.k1 * br.k1;
        const double f2 = (w0 * w0 * f00 + 2.0 * w0 * w1 * f01 + w1 * w1 * f11) / (br.p * br.p);
        if (std::sqrt(std::max(0.0, f2)) <= br.best) continue;
        h = (w0 / br.p) * g + (w1 / br.p) * g1;
        PowerOptions p = power;
        p.floor = br.best;
        br.best = std::max(br.best, reduced_top_eigenvalue(h, p));
      }
    }
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Branch& bp = branches[2 * k];
    const Branch& bm = branches[2 * k + 1];
    out[k].ggm_plus = bp.p > 0.0 ? ggm_from_overlap(bp.best) : nan;
    out[k].ggm_minus = bm.p > 0.0 ? ggm_from_overlap(bm.best) : nan;
  }
  return out;
}

enum class WeakMode { Independent, Sequential };

inline std::string to_string(WeakMode m) { return m == WeakMode::Independent ? "independent" : "sequential"; }

inline WeakMode parse_weak_mode(std::string_view name) {
  if (name == "independent") return WeakMode::Independent;
  if (name == "sequential") return WeakMode::Sequential;
  throw ConfigError("unknown weak-measurement mode '" + std::string(name) + "' (independent|sequential)");
}

struct WeakProtocol {
  Layout layout = Layout::BrickWall;
  int num_qubits = 12;
  int t_equil = 50;
  int trials = 100;
  WeakMode mode = WeakMode::Independent;
};

/// One circuit realization of the weak-measurement protocol: evolve |0...0>
/// for t_equil iterations, then return, per lambda, the trial-averaged GGM.
///
/// Independent mode: every trial measures a uniformly drawn site of the same
/// equilibrated state and contributes p+ G+ + p- G-. Sequential mode: trials
/// act one after another on the evolving state with Born-sampled outcomes.
inline std::vector<double> weak_measurement_realization(const WeakProtocol& proto, const std::vector<double>& lambdas,
                                                        RngStream& rng) {
  if (proto.trials < 1) throw ArgumentError("trials must be >= 1");
  if (proto.t_equil < 1) throw ArgumentError("t_equil must be >= 1");
  StateVector state(proto.num_qubits);
  for (int t = 0; t < proto.t_equil; ++t) step(proto.layout, state, rng);

  std::vector<double> result(lambdas.size(), 0.0);
  if (proto.mode == WeakMode::Independent) {
    RngStream sites = rng.substream(1);
    std::vector<int> hits(static_cast<std::size_t>(proto.num_qubits + 1), 0);
    for (int k = 0; k < proto.trials; ++k) ++hits[static_cast<std::size_t>(sites.uniform_int(1, proto.num_qubits))];
    for (int s = 1; s <= proto.num_qubits; ++s) {
      if (hits[static_cast<std::size_t>(s)] == 0) continue;
      const auto branches = weak_branch_ggm(state, s, lambdas);
      for (std::size_t k = 0; k < lambdas.size(); ++k)
        result[k] += hits[static_cast<std::size_t>(s)] * branches[k].weighted();
    }
    for (double& v : result) v /= proto.trials;
    return result;
  }

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    RngStream trial_rng = rng.substream(2 + k);
    const WeakMeasurementPair pair(lambdas[k]);
    StateVector cur = state;
    double acc = 0.0;
    for (int trial = 0; trial < proto.trials; ++trial) {
      const int site = trial_rng.uniform_int(1, proto.num_qubits);
      StateVector plus = cur;
      const double p_plus = apply_one_qubit(plus, site, pair.plus(), Normalize::No);
      const Outcome o = trial_rng.uniform01() < p_plus ? Outcome::Plus : Outcome::Minus;
      cur = apply_weak_measurement(cur, site, pair, o).state;
      acc += ggm(cur);
    }
    result[k] = acc / proto.trials;
  }
  return result;
}

/// Mean over realizations of weak_measurement_realization; realization r uses
/// `rng.substream(r)`.
inline std::vector<double> ensemble_weak_ggm(const WeakProtocol& proto, const std::vector<double>& lambdas,
                                             int realizations, const RngStream& rng) {
  if (realizations < 1) throw ArgumentError("realizations must be >= 1");
  std::vector<double> mean(lambdas.size(), 0.0);
  for (int r = 0; r < realizations; ++r) {
    RngStream stream = rng.substream(static_cast<std::uint64_t>(r));
    const auto v = weak_measurement_realization(proto, lambdas, stream);
    for (std::size_t k = 0; k < v.size(); ++k) mean[k] += v[k];
  }
  for (double& m : mean) m /= realizations;
  return mean;
}

}  // namespace ggmsim
