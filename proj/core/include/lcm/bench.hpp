#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcm/covariance.hpp"
#include "lcm/em.hpp"
#include "lcm/pqn.hpp"
#include "lcm/sqp.hpp"

namespace lcm {

struct SolverSettings {
  EmConfig em;
  PqnConfig pqn;  // pqn.seed is overridden per restart
  SqpConfig sqp;
};

/// One restart of one method.
struct RunRecord {
  Method method = Method::em;
  std::string dataset_id;
  std::uint64_t seed = 0;  // restart seed; drives the initial point and PQN backtracking
  int init_id = 0;
  int iterations = 0;
  bool converged = false;
  std::string status;
  double log_likelihood = 0.0;
  double wall_seconds = 0.0;
  SolverTrace trace;
  LcmParams initial;
  LcmParams params;
  std::optional<Matrix> curvature;
};

struct ExperimentConfig {
  std::vector<Method> methods{Method::em, Method::sqp, Method::pqn};
  int restarts = 10;
  std::uint64_t base_seed = 0;
  SolverSettings solvers;

  void validate() const;
};

/// Initial point of restart r: every block uniform on its simplex, drawn from
/// derive_seed(base_seed, r).
LcmParams restart_init(const BlockLayout& layout, std::uint64_t base_seed, int restart);

/// Runs a single method from init.
RunRecord run_method(Method method, const Dataset& data, const LcmParams& init, const SolverSettings& solvers,
                     std::uint64_t seed);

/// For each restart draws one shared initial point and runs every method
/// from it. Records are ordered by method (as listed), then restart.
std::vector<RunRecord> run_experiment(const Dataset& data, int components, const std::string& dataset_id,
                                      const ExperimentConfig& cfg);

/// Highest final log-likelihood; ties go to fewer iterations, then lower seed.
const RunRecord& best_of(const std::vector<RunRecord>& records, Method method);

/// Smallest root-mean-square difference over all packed coordinates across
/// relabellings of a's components. Throws InputError for K > 8.
double aligned_rmse(const LcmParams& a, const LcmParams& b);

struct MethodSummary {
  Method method = Method::em;
  int runs = 0;
  int converged_runs = 0;
  double best_log_likelihood = 0.0;
  int best_iterations = 0;
  double median_iterations = 0.0;
  double best_wall_seconds = 0.0;
  double seconds_per_iteration = 0.0;  // best run's wall time / iterations
  double mean_wall_seconds = 0.0;
};

struct ComparisonReport {
  std::string dataset_id;
  std::vector<MethodSummary> summaries;
  std::vector<Method> rmse_methods;
  Matrix rmse;  // aligned_rmse between best runs, symmetric with zero diagonal
};

ComparisonReport summarize(const std::vector<RunRecord>& records);

double median(std::vector<double> values);

/// Per-coordinate intervals from the record's curvature matrix, restricted to
/// the feasible directions. Throws NumericalError when it is not positive
/// definite there, InputError when the record carries no curvature.
std::vector<Interval> confidence_report(const RunRecord& record, double level = 0.95);

}  // namespace lcm
