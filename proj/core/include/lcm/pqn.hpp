#pragma once

#include <cstdint>

#include "lcm/lbfgs.hpp"
#include "lcm/model.hpp"
#include "lcm/spg.hpp"
#include "lcm/trace.hpp"

namespace lcm {

struct PqnConfig {
  double epsilon = 1e-4;  // on ||P(theta - g) - theta||_1
  std::size_t memory = 5;
  double nu = 1e-4;
  SpgConfig spg;
  int max_iter = 500;
  int max_line_search = 30;
  SigmaConvention sigma = SigmaConvention::curvature;
  std::uint64_t seed = 0;  // drives the randomised backtracking

  void validate() const;
};

struct PqnResult {
  FitResult fit;
  LbfgsMemory memory;
};

/// L1 norm of P_F(theta - g) - theta, the projected-gradient stationarity measure.
double projected_gradient_residual(const Vector& theta, const Vector& g, const ProductSimplex& geom);

/// Limited-memory projected quasi-Newton minimisation of an arbitrary smooth
/// objective over a product of simplexes. Exposed for testing the outer loop
/// on functions other than the LCM likelihood.
struct PqnRawResult {
  Vector x;
  int iterations = 0;
  bool converged = false;
  std::string status;
  std::vector<Vector> iterates;
  LbfgsMemory memory;
  /// The final memory, or the last nonempty one when a retry cleared it.
  LbfgsMemory curvature_memory;
};
PqnRawResult minimize_pqn(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                          const PqnConfig& cfg);

/// Maximum-likelihood fit of the LCM by projected quasi-Newton.
PqnResult fit_pqn(const Dataset& data, const LcmParams& init, const PqnConfig& cfg = {});

}  // namespace lcm
