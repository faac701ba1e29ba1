#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ggmsim/error.hpp"
#include "ggmsim/metrics.hpp"
#include "ggmsim/random.hpp"
#include "ggmsim/series.hpp"
#include "ggmsim/state.hpp"

namespace ggmsim {

inline constexpr int kMaxBondDimension = 64;

enum class MpsFlavor { UnitarySlices, GinibreSlices };

inline std::string to_string(MpsFlavor f) {
  return f == MpsFlavor::UnitarySlices ? "unitary" : "ginibre";
}

inline MpsFlavor parse_flavor(std::string_view name) {
  if (name == "unitary") return MpsFlavor::UnitarySlices;
  if (name == "ginibre") return MpsFlavor::GinibreSlices;
  throw ConfigError("unknown rmps flavor '" + std::string(name) + "' (unitary|ginibre)");
}

/// Periodic MPS: amplitude(i_1..i_N) = Tr(A_1^{i_1} ... A_N^{i_N}).
struct MpsChain {
  int num_sites = 0;
  int bond_dim = 0;
  MpsFlavor flavor = MpsFlavor::UnitarySlices;
  std::vector<Eigen::MatrixXcd> slices;  ///< slices[2*(k-1) + i] is A_k^i

  const Eigen::MatrixXcd& slice(int site, int physical) const {
    return slices[static_cast<std::size_t>(2 * (site - 1) + physical)];
  }
};

/// Every one of the 2N slices is an independent Haar unitary or Ginibre matrix.
inline MpsChain sample_rmps(RngStream& rng, int num_sites, int bond_dim, MpsFlavor flavor) {
  if (num_sites < 2) throw ArgumentError("an MPS chain needs at least 2 sites");
  if (bond_dim < 1 || bond_dim > kMaxBondDimension) {
    throw ConfigError("bond dimension " + std::to_string(bond_dim) + " outside [1, " +
                      std::to_string(kMaxBondDimension) + "]");
  }
  MpsChain chain{num_sites, bond_dim, flavor, {}};
  chain.slices.reserve(static_cast<std::size_t>(2 * num_sites));
  for (int k = 0; k < 2 * num_sites; ++k) {
    chain.slices.push_back(flavor == MpsFlavor::UnitarySlices ? haar_unitary_matrix(rng, bond_dim)
                                                              : ginibre_matrix(rng, bond_dim));
  }
  return chain;
}

namespace detail {

// Products A_first^{i_first} ... A_last^{i_last} for every configuration of the
// block, stored as rows of vec(product) (column-major). Configuration bits put
// site `first` most significant.
inline std::vector<Eigen::MatrixXcd> block_products(const MpsChain& chain, int first, int last) {
  std::vector<Eigen::MatrixXcd> cur{chain.slice(first, 0), chain.slice(first, 1)};
  for (int site = first + 1; site <= last; ++site) {
    std::vector<Eigen::MatrixXcd> next;
    next.reserve(cur.size() * 2);
    for (const auto& p : cur) {
      next.push_back(p * chain.slice(site, 0));
      next.push_back(p * chain.slice(site, 1));
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace detail

/// Contracts the chain to a normalized statevector by meeting in the middle:
/// left products over sites 1..ceil(N/2), right products over the rest, and
/// amplitude(a, b) = Tr(L_a R_b) evaluated as one matrix product.
inline StateVector mps_to_statevector(const MpsChain& chain) {
  const int n = chain.num_sites;
  check_qubit_count(n);
  const int d = chain.bond_dim;
  const int h = (n + 1) / 2;
  const auto left = detail::block_products(chain, 1, h);
  const auto right = detail::block_products(chain, h + 1, n);

  const Eigen::Index dd = Eigen::Index{d} * d;
  Eigen::MatrixXcd lmat(static_cast<Eigen::Index>(left.size()), dd);
  for (std::size_t a = 0; a < left.size(); ++a)
    lmat.row(static_cast<Eigen::Index>(a)) = left[a].reshaped().transpose();
  Eigen::MatrixXcd rmat(static_cast<Eigen::Index>(right.size()), dd);
  for (std::size_t b = 0; b < right.size(); ++b)
    rmat.row(static_cast<Eigen::Index>(b)) = right[b].transpose().reshaped().transpose();

  // (b, a) of this product sits at b + a * 2^(n-h), the basis index.
  Eigen::MatrixXcd amps = rmat * lmat.transpose();
  StateVector s(n, amps.reshaped());
  if (!(s.squared_norm() > 0.0)) throw DegenerateStateError("MPS contracts to the zero vector");
  s.normalize();
  return s;
}

/// Mean GGM of freshly sampled chains at each bond dimension. Realization r
/// draws from `rng.substream(r)` and samples the grid in order.
inline MetricSeries ggm_vs_bond_dimension(int num_sites, const std::vector<int>& d_grid, int realizations,
                                          const RngStream& rng, MpsFlavor flavor) {
  if (d_grid.empty()) throw ArgumentError("empty bond-dimension grid");
  if (realizations < 1) throw ArgumentError("realizations must be >= 1");
  std::vector<std::vector<double>> per_d(d_grid.size());
  for (int r = 0; r < realizations; ++r) {
    RngStream stream = rng.substream(static_cast<std::uint64_t>(r));
    for (std::size_t k = 0; k < d_grid.size(); ++k) {
      per_d[k].push_back(ggm(mps_to_statevector(sample_rmps(stream, num_sites, d_grid[k], flavor))));
    }
  }
  MetricSeries out;
  for (std::size_t k = 0; k < d_grid.size(); ++k) {
    const SampleStats st = sample_stats(per_d[k]);
    out.abscissa.push_back(d_grid[k]);
    out.mean.push_back(st.mean);
    out.stderr_.push_back(st.stderr_);
    out.count.push_back(st.count);
  }
  return out;
}

/// For each circuit value G^RU(t), the smallest grid D whose (running-max
/// smoothed) RMPS value lies within `tol`; nullopt when no grid D qualifies.
inline std::vector<std::optional<int>> match_min_bond_dimension(const std::vector<double>& ru_values,
                                                                const MetricSeries& rmps_curve,
                                                                double tol = 1e-2) {
  if (ru_values.empty() || rmps_curve.size() == 0) throw ArgumentError("empty grid in D_min matching");
  std::vector<double> smooth(rmps_curve.mean);
  for (std::size_t k = 1; k < smooth.size(); ++k) smooth[k] = std::max(smooth[k], smooth[k - 1]);
  std::vector<std::optional<int>> out;
  out.reserve(ru_values.size());
  for (double g : ru_values) {
    std::optional<int> best;
    for (std::size_t k = 0; k < smooth.size(); ++k) {
      if (std::abs(g - smooth[k]) <= tol) {
        best = static_cast<int>(rmps_curve.abscissa[k]);
        break;
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Grid used for bond-dimension sweeps.
inline std::vector<int> default_d_grid() { return {1, 2, 4, 8, 12, 16, 24, 32, 40, 48, 56, 64}; }

}  // namespace ggmsim
