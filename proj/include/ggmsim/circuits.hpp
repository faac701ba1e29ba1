#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ggmsim/error.hpp"
#include "ggmsim/gates.hpp"
#include "ggmsim/random.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

enum class Layout { BrickWall, Star, AllPairs, CliffordBrick };

inline std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::BrickWall: return "brick";
    case Layout::Star: return "star";
    case Layout::AllPairs: return "allpairs";
    case Layout::CliffordBrick: return "clifford";
  }
  return "?";
}

inline Layout parse_layout(std::string_view name) {
  if (name == "brick") return Layout::BrickWall;
  if (name == "star") return Layout::Star;
  if (name == "allpairs") return Layout::AllPairs;
  if (name == "clifford") return Layout::CliffordBrick;
  throw ConfigError("unknown layout '" + std::string(name) + "' (brick|star|allpairs|clifford)");
}

using Bond = std::pair<int, int>;

/// Site pairs touched in one iteration, in application order.
///
/// Brick wall and its Clifford twin: odd bonds (1,2),(3,4),... then even bonds
/// (2,3),(4,5),...; for odd N the pattern is simply truncated at site N.
/// Star: (1,r) for r = 2..N. All pairs: i<j in lexicographic order.
inline std::vector<Bond> iteration_bonds(Layout layout, int num_qubits) {
  std::vector<Bond> bonds;
  switch (layout) {
    case Layout::BrickWall:
    case Layout::CliffordBrick:
      for (int i = 1; i + 1 <= num_qubits; i += 2) bonds.emplace_back(i, i + 1);
      for (int i = 2; i + 1 <= num_qubits; i += 2) bonds.emplace_back(i, i + 1);
      break;
    case Layout::Star:
      for (int r = 2; r <= num_qubits; ++r) bonds.emplace_back(1, r);
      break;
    case Layout::AllPairs:
      for (int i = 1; i <= num_qubits; ++i)
        for (int j = i + 1; j <= num_qubits; ++j) bonds.emplace_back(i, j);
      break;
  }
  return bonds;
}

inline int gates_per_iteration(Layout layout, int num_qubits) {
  if (layout == Layout::AllPairs) return num_qubits * (num_qubits - 1) / 2;
  return num_qubits - 1;
}

namespace detail {

inline int step_haar(StateVector& state, RngStream& rng, Layout layout) {
  int applied = 0;
  for (const auto& [i, j] : iteration_bonds(layout, state.num_qubits())) {
    apply_two_qubit(state, i, j, haar_unitary(rng, 4));
    ++applied;
  }
  return applied;
}

}  // namespace detail

// Each step applies one full iteration with fresh gate draws and returns the
// number of gates drawn.

inline int step_brick_wall(StateVector& state, RngStream& rng) {
  return detail::step_haar(state, rng, Layout::BrickWall);
}

inline int step_star(StateVector& state, RngStream& rng) {
  return detail::step_haar(state, rng, Layout::Star);
}

inline int step_all_pairs(StateVector& state, RngStream& rng) {
  return detail::step_haar(state, rng, Layout::AllPairs);
}

/// One Clifford gate (H, S or CNOT, uniformly) per brick-wall bond.
inline int step_clifford(StateVector& state, RngStream& rng) {
  int applied = 0;
  for (const auto& [a, b] : iteration_bonds(Layout::CliffordBrick, state.num_qubits())) {
    apply_clifford(state, a, b, random_clifford_gate(rng));
    ++applied;
  }
  return applied;
}

inline int step(Layout layout, StateVector& state, RngStream& rng) {
  switch (layout) {
    case Layout::BrickWall: return step_brick_wall(state, rng);
    case Layout::Star: return step_star(state, rng);
    case Layout::AllPairs: return step_all_pairs(state, rng);
    case Layout::CliffordBrick: return step_clifford(state, rng);
  }
  return 0;
}

/// Observer output per completed iteration; rows[t-1] holds iteration t.
struct Trajectory {
  Layout layout;
  int num_qubits;
  int t_max;
  std::vector<std::vector<double>> rows;
};

/// Runs `t_max` iterations of `layout` on `state` (mutated in place), calling
/// `observer(t, state)` after every complete iteration.
template <class Observer>
Trajectory evolve(StateVector& state, Layout layout, int t_max, RngStream& rng, Observer&& observer) {
  if (t_max < 1) throw ArgumentError("t_max must be >= 1");
  Trajectory traj{layout, state.num_qubits(), t_max, {}};
  traj.rows.reserve(static_cast<std::size_t>(t_max));
  for (int t = 1; t <= t_max; ++t) {
    step(layout, state, rng);
    traj.rows.push_back(observer(t, static_cast<const StateVector&>(state)));
  }
  return traj;
}

}  // namespace ggmsim
