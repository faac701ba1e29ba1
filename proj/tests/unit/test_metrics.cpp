#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ggmsim/circuits.hpp"
#include "ggmsim/metrics.hpp"
#include "ggmsim/random.hpp"

using namespace ggmsim;

namespace {

// Independent oracle: reshape by reading qubit values one at a time and take
// the top singular value with Eigen's SVD.
double svd_max_schmidt_sq(const StateVector& s, const BipartitionMask& cut) {
  const int n = s.num_qubits();
  std::vector<int> a, b;
  for (int q = 1; q <= n; ++q) (cut.contains(q) ? a : b).push_back(q);
  Eigen::MatrixXcd m(1 << a.size(), 1 << b.size());
  for (Eigen::Index idx = 0; idx < s.dim(); ++idx) {
    int ra = 0, cb = 0;
    for (int q : a) ra = 2 * ra + int((idx >> (n - q)) & 1);
    for (int q : b) cb = 2 * cb + int((idx >> (n - q)) & 1);
    m(ra, cb) = s[idx];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const double sv = svd.singularValues()(0);
  return sv * sv;
}

double svd_ggm(const StateVector& s) {
  double best = 0.0;
  for (const auto& cut : enumerate_bipartitions(s.num_qubits())) best = std::max(best, svd_max_schmidt_sq(s, cut));
  return 1.0 - best;
}

StateVector w3() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b001) = v(0b010) = v(0b100) = 1.0 / std::sqrt(3.0);
  return StateVector(3, v);
}

StateVector random_product(RngStream& rng, int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (int q = 0; q < n; ++q) {
    Eigen::Vector2cd f(rng.complex_gaussian(), rng.complex_gaussian());
    f.normalize();
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      next(2 * i) = v(i) * f(0);
      next(2 * i + 1) = v(i) * f(1);
    }
    v = next;
  }
  return StateVector(n, v);
}

}  // namespace

TEST(Bipartitions, Counts) {
  EXPECT_EQ(enumerate_bipartitions(2).size(), 1u);
  EXPECT_EQ(enumerate_bipartitions(3).size(), 3u);
  EXPECT_EQ(enumerate_bipartitions(12).size(), 2047u);
}

TEST(Bipartitions, OrderForThreeQubits) {
  const auto cuts = enumerate_bipartitions(3);
  EXPECT_EQ(cuts[0], BipartitionMask::from_qubits(3, {1}));
  EXPECT_EQ(cuts[1], BipartitionMask::from_qubits(3, {1, 2}));
  EXPECT_EQ(cuts[2], BipartitionMask::from_qubits(3, {1, 3}));
}

TEST(Bipartitions, CanonicalAndComplement) {
  const auto m = BipartitionMask::from_qubits(5, {2, 4});
  EXPECT_FALSE(m.is_canonical());
  EXPECT_EQ(m.canonical(), BipartitionMask::from_qubits(5, {1, 3, 5}));
  EXPECT_EQ(m.complement().complement(), m);
  EXPECT_THROW(BipartitionMask(3, 0), ArgumentError);
  EXPECT_THROW(BipartitionMask(3, 7), ArgumentError);
  EXPECT_THROW(BipartitionMask::from_qubits(3, {4}), ArgumentError);
}

TEST(Bipartitions, EveryCutExactlyOnce) {
  const int n = 6;
  std::vector<int> hits(1 << n, 0);
  for (const auto& c : enumerate_bipartitions(n)) {
    ++hits[c.qubit_set()];
    ++hits[c.complement().qubit_set()];
  }
  for (std::uint32_t s = 1; s + 1 < (1u << n); ++s) EXPECT_EQ(hits[s], 1) << s;
}

TEST(Ggm, GhzIsOneHalf) {
  for (int n = 2; n <= 12; ++n) {
    EXPECT_NEAR(ggm(ghz_state(n)), 0.5, 1e-12) << n;
  }
}

TEST(Ggm, ProductIsZero) {
  RngStream rng(1, 0);
  for (int n = 2; n <= 12; ++n) {
    EXPECT_NEAR(ggm(new_basis_state(n, std::string(n, '0'))), 0.0, 1e-12);
    EXPECT_NEAR(ggm(uniform_state(n)), 0.0, 1e-12);
    EXPECT_NEAR(ggm(random_product(rng, n)), 0.0, 1e-12);
  }
}

TEST(Ggm, WStateOfThree) {
  const StateVector w = w3();
  EXPECT_NEAR(ggm(w), 1.0 / 3.0, 1e-10);
  for (const auto& cut : enumerate_bipartitions(3)) EXPECT_NEAR(max_schmidt_sq(w, cut), 2.0 / 3.0, 1e-10);
}

TEST(Ggm, MatchesDenseAndSvdOraclesPerCut) {
  RngStream rng(2, 0);
  for (int n : {4, 6, 8}) {
    for (int trial = 0; trial < 20; ++trial) {
      const StateVector s = haar_state(rng, n);
      for (const auto& cut : enumerate_bipartitions(n)) {
        const double p = max_schmidt_sq(s, cut);
        EXPECT_NEAR(p, max_schmidt_sq_dense(s, cut), 1e-9);
        EXPECT_NEAR(p, svd_max_schmidt_sq(s, cut), 1e-9);
      }
      EXPECT_NEAR(ggm(s), svd_ggm(s), 1e-9);
      EXPECT_NEAR(ggm(s), ggm_dense(s), 1e-9);
    }
  }
}

TEST(Ggm, CircuitStatesMatchOracle) {
  // Early circuit states have near-degenerate Schmidt spectra on some cuts.
  RngStream rng(2, 1);
  for (Layout l : {Layout::BrickWall, Layout::Star, Layout::CliffordBrick}) {
    StateVector s(8);
    for (int t = 1; t <= 6; ++t) {
      step(l, s, rng);
      EXPECT_NEAR(ggm(s), svd_ggm(s), 1e-9) << to_string(l) << " t=" << t;
    }
  }
}

TEST(Ggm, ComplementGivesSameEigenvalue) {
  RngStream rng(3, 0);
  const StateVector s = haar_state(rng, 7);
  for (const auto& cut : enumerate_bipartitions(7))
    EXPECT_NEAR(max_schmidt_sq(s, cut), max_schmidt_sq(s, cut.complement()), 1e-12);
}

TEST(Ggm, InvariantUnderLocalUnitaries) {
  RngStream rng(4, 0);
  for (int trial = 0; trial < 10; ++trial) {
    StateVector s = haar_state(rng, 6);
    const double before = ggm(s);
    for (int q = 1; q <= 6; ++q) apply_one_qubit(s, q, haar_unitary(rng, 2));
    EXPECT_NEAR(ggm(s), before, 1e-10);
  }
}

TEST(Ggm, RangeOverRandomStates) {
  RngStream rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const double g = ggm(haar_state(rng, 2 + trial % 9));
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 0.5 + 1e-12);
  }
}

TEST(Ggm, PartSizeRestrictionOnlyDropsCuts) {
  RngStream rng(5, 1);
  const StateVector s = haar_state(rng, 8);
  EXPECT_GE(ggm(s, {1, {}}) + 1e-12, ggm(s));
  EXPECT_NEAR(ggm(s, {4, {}}), ggm(s), 1e-12);
}

TEST(Ggm, RejectsUnnormalizedInput) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0) = 1.1;
  const StateVector s(3, v);
  EXPECT_THROW(ggm(s), ContractError);
  EXPECT_THROW(max_schmidt_sq(s, BipartitionMask::from_qubits(3, {1})), ContractError);
}

TEST(PowerIteration, StartOrthogonalToTopEigenvector) {
  // The all-ones start has no overlap with (1,-1); the restart must find 0.9.
  Eigen::MatrixXcd h(2, 2);
  h << 0.5, -0.4, -0.4, 0.5;
  const PowerResult r = dominant_eigenvalue(h);
  EXPECT_NEAR(r.value, 0.9, 1e-12);
  EXPECT_GE(r.restarts, 1);
}

TEST(PowerIteration, DegenerateTopEigenvalue) {
  const Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(4, 4) * 0.25;
  EXPECT_NEAR(dominant_eigenvalue(h).value, 0.25, 1e-15);
}

TEST(PowerIteration, StateWithOrthogonalSchmidtVector) {
  // sqrt(0.8)|-0> + sqrt(0.2)|+1>: the dominant Schmidt vector |-> is
  // orthogonal to the all-ones start.
  Eigen::VectorXcd v(4);
  v << std::sqrt(0.4), std::sqrt(0.1), -std::sqrt(0.4), std::sqrt(0.1);
  const StateVector s(2, v);
  EXPECT_NEAR(max_schmidt_sq(s, BipartitionMask::from_qubits(2, {1})), 0.8, 1e-9);
  EXPECT_NEAR(ggm(s), 0.2, 1e-9);
}

TEST(Ipr, AnchorValues) {
  for (int n = 2; n <= 12; ++n) {
    EXPECT_NEAR(ipr(new_basis_state(n, std::string(n, '1'))), 1.0, 1e-12);
    EXPECT_NEAR(ipr(uniform_state(n)), std::ldexp(1.0, n), 1e-12 * std::ldexp(1.0, n));
    EXPECT_NEAR(ipr(ghz_state(n)), 2.0, 1e-12);
  }
}

TEST(Ipr, PermutationInvariantAndBounded) {
  RngStream rng(6, 0);
  StateVector s = haar_state(rng, 6);
  const double before = ipr(s);
  Eigen::VectorXcd v = s.amplitudes().reverse();
  EXPECT_NEAR(ipr(StateVector(6, v)), before, 1e-12);
  EXPECT_GE(before, 1.0);
  EXPECT_LE(before, 64.0);
}
