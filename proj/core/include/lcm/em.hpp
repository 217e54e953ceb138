#pragma once

#include "lcm/model.hpp"
#include "lcm/trace.hpp"

namespace lcm {

struct EmConfig {
  double epsilon = 1e-4;  // stop when the L1 parameter change drops to this
  int max_iter = 5000;

  void validate() const;
};

/// Floor on a component's responsibility mass; below it the categorical rows
/// of that component fall back to the uniform distribution.
inline constexpr double kComponentMassFloor = 1e-10;

/// eta_k = mean_i D_ik.
Vector m_step_weights(const Responsibilities& resp);

/// Weighted category frequencies; result[k][j] is the row of variable j.
std::vector<std::vector<Vector>> m_step_categorical(const Dataset& data, const Responsibilities& resp);

/// Alternates E- and M-steps from init until the packed parameters move by at
/// most epsilon in L1 norm, or max_iter is reached (flagged non-converged).
FitResult fit_em(const Dataset& data, const LcmParams& init, const EmConfig& cfg = {});

}  // namespace lcm
