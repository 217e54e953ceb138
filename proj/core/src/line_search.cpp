#include "lcm/line_search.hpp"

#include <cmath>

#include "lcm/types.hpp"

namespace lcm {

LineSearchResult armijo_backtrack(const std::function<double(double)>& phi, double reference, double slope,
                                  double nu, int max_trials, Rng& rng) {
  if (!(nu > 0.0 && nu < 1.0)) throw InputError("Armijo constant must lie in (0, 1)");
  if (max_trials < 1) throw InputError("line search needs at least one trial");
  LineSearchResult out;
  double alpha = 1.0;
  for (int trial = 1; trial <= max_trials; ++trial) {
    const double value = phi(alpha);
    out.trials = trial;
    if (std::isfinite(value) && value <= reference + nu * alpha * slope) {
      out.alpha = alpha;
      out.value = value;
      out.success = true;
      return out;
    }
    alpha *= rng.uniform_open();
  }
  return out;
}

}  // namespace lcm
