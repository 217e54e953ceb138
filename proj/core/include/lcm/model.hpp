#pragma once

#include <functional>
#include <span>

#include "lcm/types.hpp"

namespace lcm {

/// Floor applied to mixture densities before taking logarithms.
inline constexpr double kLogFloor = 1e-300;
/// Floor applied to mixture densities used as gradient denominators.
inline constexpr double kGradientFloor = 1e-10;

/// Posterior class probabilities, one row per observation (N x K).
struct Responsibilities {
  Matrix D;
};

/// prod_j pi_{k, j, y_j} for a 1-based observation y and 0-based component k.
double component_density(std::span<const int> y, int k, const LcmParams& params);

/// Sum over observations of log sum_k eta_k f(y | pi_k).
double log_likelihood(const Dataset& data, const LcmParams& params);

/// Same as above on an unchecked packed point (raw extension outside the simplexes).
double log_likelihood(const Dataset& data, const PackedVector& packed);

/// Analytic gradient of the log-likelihood, in packed block order.
PackedVector gradient(const Dataset& data, const LcmParams& params);
Vector log_likelihood_gradient(const Dataset& data, const PackedVector& packed);

/// Symmetric difference quotient of the log-likelihood; a test oracle.
PackedVector finite_difference_gradient(const Dataset& data, const PackedVector& packed, double h);

/// Symmetric difference quotient of an arbitrary scalar function.
Vector central_difference(const std::function<double(const Vector&)>& fn, const Vector& x, double h);

Responsibilities responsibilities(const Dataset& data, const LcmParams& params);

/// Responsibilities per distinct pattern of data (patterns x K).
Matrix pattern_responsibilities(const Dataset& data, const PackedVector& packed);

/// f = -L, the quantity the constrained solvers minimise.
double negative_objective(const Dataset& data, const PackedVector& packed);
Vector negative_objective_gradient(const Dataset& data, const PackedVector& packed);

/// Value and gradient of f = -L in one pass over the data.
double negative_objective_with_gradient(const Dataset& data, const PackedVector& packed, Vector& grad);

/// Throws InputError when data and layout disagree on the category scheme.
void check_compatible(const Dataset& data, const BlockLayout& layout);

}  // namespace lcm
