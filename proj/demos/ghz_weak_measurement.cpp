// Weak measurement of one qubit of a GHZ state: the post-measurement GGM
// follows (1 - lambda)^2 / (2 (1 + lambda^2)) for either outcome.

#include <cstdio>

#include "ggmsim/ggmsim.hpp"

int main() {
  using namespace ggmsim;
  const StateVector ghz = ghz_state(6);
  std::printf("%8s %10s %10s %10s %10s\n", "lambda", "p_plus", "G_plus", "G_minus", "closed");
  for (double lambda : default_lambda_grid()) {
    const WeakMeasurementPair pair(lambda);
    const auto plus = apply_weak_measurement(ghz, 3, pair, Outcome::Plus);
    const auto minus = apply_weak_measurement(ghz, 3, pair, Outcome::Minus);
    std::printf("%8.2f %10.6f %10.6f %10.6f %10.6f\n", lambda, plus.probability, ggm(plus.state),
                ggm(minus.state), analytic_ghz_decay(lambda));
  }
}
