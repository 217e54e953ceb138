#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcm/types.hpp"

namespace lcm {

enum class Method { em, pqn, sqp };

std::string_view to_string(Method m);
/// Parses "em", "pqn" or "sqp"; throws InputError otherwise.
Method parse_method(std::string_view name);

/// One iterate of a solver run. Entry 0 is the initial point.
struct TraceEntry {
  int iteration = 0;
  double log_likelihood = 0.0;
  double step_length = 0.0;   // accepted line-search step (1 for EM)
  double change = 0.0;        // L1 norm of the parameter change
  double feasibility = 0.0;   // see feasibility_residual()
  double elapsed_seconds = 0.0;
};

struct SolverTrace {
  std::vector<TraceEntry> entries;
};

/// Outcome shared by all three solvers.
struct FitResult {
  Method method = Method::em;
  LcmParams params;
  SolverTrace trace;
  int iterations = 0;
  bool converged = false;
  double log_likelihood = 0.0;
  std::string status;
  /// Final Hessian approximation of f = -L (PQN and SQP only).
  std::optional<Matrix> curvature;
};

/// Wall-clock stopwatch used for trace timestamps.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace lcm
