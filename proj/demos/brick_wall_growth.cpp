// GGM and IPR of a single brick-wall trajectory from |0...0>.

#include <cstdio>
#include <cstdlib>

#include "ggmsim/ggmsim.hpp"

int main(int argc, char** argv) {
  using namespace ggmsim;
  const int n = argc > 1 ? std::atoi(argv[1]) : 8;
  const int t_max = argc > 2 ? std::atoi(argv[2]) : 20;
  RngStream rng(2024, 0);
  StateVector state(n);
  std::printf("%4s %10s %12s\n", "t", "ggm", "ipr");
  evolve(state, Layout::BrickWall, t_max, rng, [](int t, const StateVector& s) {
    const double g = ggm(s), i = ipr(s);
    std::printf("%4d %10.6f %12.3f\n", t, g, i);
    return std::vector<double>{g, i};
  });
}
