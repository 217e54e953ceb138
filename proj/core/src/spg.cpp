#include "lcm/spg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "lcm/line_search.hpp"

namespace lcm {

void SpgConfig::validate() const {
  if (!(alpha_min > 0.0 && alpha_min < alpha_max)) throw InputError("SPG needs 0 < alpha_min < alpha_max");
  if (history < 1) throw InputError("SPG history must be at least 1");
  if (inner_max_iter < 1) throw InputError("SPG inner_max_iter must be at least 1");
  if (!(inner_tol > 0.0)) throw InputError("SPG inner_tol must be positive");
  if (!(nu > 0.0 && nu < 1.0)) throw InputError("SPG nu must lie in (0, 1)");
  if (max_line_search < 1) throw InputError("SPG max_line_search must be at least 1");
  if (!(initial_step >= 0.0)) throw InputError("SPG initial_step must be nonnegative");
}

SpgResult spg_solve(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                    const SpgConfig& cfg, Rng& rng) {
  cfg.validate();
  SpgResult out;
  Vector x = x0;
  double fx = objective.value(x);
  Vector gx = objective.gradient(x);
  std::deque<double> recent{fx};

  double spectral = cfg.initial_step;
  if (spectral <= 0.0) {
    const double pg = (project_product(Vector(x - gx), geom) - x).lpNorm<Eigen::Infinity>();
    spectral = pg > 0.0 ? 1.0 / pg : 1.0;
  }

  for (int k = 0; k < cfg.inner_max_iter; ++k) {
    out.iterations = k + 1;
    const double step = std::clamp(spectral, cfg.alpha_min, cfg.alpha_max);
    const Vector d = project_product(Vector(x - step * gx), geom) - x;
    if (d.lpNorm<1>() == 0.0 || (project_product(Vector(x - gx), geom) - x).lpNorm<1>() <= cfg.inner_tol) break;

    const double bound = *std::max_element(recent.begin(), recent.end());
    const double slope = gx.dot(d);
    auto phi = [&](double a) { return objective.value(x + a * d); };
    const LineSearchResult ls = armijo_backtrack(phi, bound, slope, cfg.nu, cfg.max_line_search, rng);
    if (!ls.success) {
      out.line_search_failed = true;
      break;
    }

    Vector x_next = x + ls.alpha * d;
    Vector g_next = objective.gradient(x_next);
    const Vector s = x_next - x;
    const Vector y = g_next - gx;
    x = std::move(x_next);
    gx = std::move(g_next);
    fx = ls.value;
    recent.push_back(fx);
    while (static_cast<int>(recent.size()) > cfg.history) recent.pop_front();

    if (cfg.step == SpectralStep::standard) {
      const double sy = s.dot(y);
      spectral = sy > 0.0 ? sy / y.squaredNorm() : cfg.alpha_max;
    } else {
      const double ss = s.squaredNorm();
      spectral = ss > 0.0 ? y.squaredNorm() / ss : cfg.alpha_max;
    }
  }
  out.x = std::move(x);
  return out;
}

}  // namespace lcm
