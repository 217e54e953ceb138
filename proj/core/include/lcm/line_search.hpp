#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "lcm/random.hpp"

namespace lcm {

/// Size of the rounding error in an objective value near `value`. Decrease
/// tests compare against reference + rounding_slack(reference) so that steps
/// whose predicted gain is below evaluation noise are not rejected forever.
inline double rounding_slack(double value) {
  return 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value));
}

struct LineSearchResult {
  double alpha = 0.0;
  double value = 0.0;  // phi(alpha) at the accepted step
  int trials = 0;
  bool success = false;
};

/// Backtracking on phi(alpha) = f(theta + alpha d) until
///   phi(alpha) <= reference + nu * alpha * slope,
/// starting at alpha = 1 and redrawing alpha ~ U(0, alpha) after each
/// rejection. slope is g^T d. Gives up after max_trials evaluations.
LineSearchResult armijo_backtrack(const std::function<double(double)>& phi, double reference, double slope,
                                  double nu, int max_trials, Rng& rng);

}  // namespace lcm
