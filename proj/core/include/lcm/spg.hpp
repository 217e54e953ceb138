#pragma once

#include <functional>

#include "lcm/random.hpp"
#include "lcm/simplex.hpp"

namespace lcm {

/// How the spectral step is refreshed from the last (s, y) pair.
enum class SpectralStep {
  standard,  // step = s^T y / y^T y
  printed,   // step = y^T y / s^T s
};

struct SpgConfig {
  double alpha_min = 1e-10;
  double alpha_max = 1e10;
  int history = 1;  // nonmonotone window; 1 is monotone
  int inner_max_iter = 100;
  double inner_tol = 1e-6;  // stop when ||P(x - grad) - x||_1 falls to this
  double nu = 1e-4;
  int max_line_search = 30;
  SpectralStep step = SpectralStep::standard;
  /// First step length; 0 selects 1 / ||P(x0 - g0) - x0||_inf.
  double initial_step = 0.0;

  void validate() const;
};

/// Objective handed to spg_solve.
struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

struct SpgResult {
  Vector x;
  int iterations = 0;
  bool line_search_failed = false;
};

/// Spectral projected gradient over a product of simplexes. x0 must be
/// feasible; every iterate stays feasible.
SpgResult spg_solve(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                    const SpgConfig& cfg, Rng& rng);

}  // namespace lcm
