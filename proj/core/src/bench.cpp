#include "lcm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lcm/simulator.hpp"

namespace lcm {

void ExperimentConfig::validate() const {
  if (methods.empty()) throw InputError("experiment needs at least one method");
  if (restarts < 1) throw InputError("experiment needs at least one restart");
  solvers.em.validate();
  solvers.pqn.validate();
  solvers.sqp.validate();
}

LcmParams restart_init(const BlockLayout& layout, std::uint64_t base_seed, int restart) {
  Rng rng(derive_seed(base_seed, static_cast<std::uint64_t>(restart)));
  return random_params(layout, rng);
}

RunRecord run_method(Method method, const Dataset& data, const LcmParams& init, const SolverSettings& solvers,
                     std::uint64_t seed) {
  const Stopwatch clock;
  FitResult fit;
  switch (method) {
    case Method::em:
      fit = fit_em(data, init, solvers.em);
      break;
    case Method::pqn: {
      PqnConfig cfg = solvers.pqn;
      cfg.seed = seed;
      fit = fit_pqn(data, init, cfg).fit;
      break;
    }
    case Method::sqp:
      fit = fit_sqp(data, init, solvers.sqp).fit;
      break;
  }
  RunRecord rec;
  rec.wall_seconds = clock.seconds();
  rec.method = method;
  rec.seed = seed;
  rec.iterations = fit.iterations;
  rec.converged = fit.converged;
  rec.status = fit.status;
  rec.log_likelihood = fit.log_likelihood;
  rec.trace = std::move(fit.trace);
  rec.initial = init;
  rec.params = std::move(fit.params);
  rec.curvature = std::move(fit.curvature);
  return rec;
}

std::vector<RunRecord> run_experiment(const Dataset& data, int components, const std::string& dataset_id,
                                      const ExperimentConfig& cfg) {
  cfg.validate();
  const BlockLayout layout(components, data.scheme());
  std::vector<std::vector<RunRecord>> by_method(cfg.methods.size());
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(r));
    const LcmParams init = restart_init(layout, cfg.base_seed, r);
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      RunRecord rec = run_method(cfg.methods[m], data, init, cfg.solvers, seed);
      rec.dataset_id = dataset_id;
      rec.init_id = r;
      by_method[m].push_back(std::move(rec));
    }
  }
  std::vector<RunRecord> out;
  for (auto& group : by_method) {
    for (auto& rec : group) out.push_back(std::move(rec));
  }
  return out;
}

const RunRecord& best_of(const std::vector<RunRecord>& records, Method method) {
  const RunRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.method != method) continue;
    if (best == nullptr || r.log_likelihood > best->log_likelihood ||
        (r.log_likelihood == best->log_likelihood &&
         (r.iterations < best->iterations || (r.iterations == best->iterations && r.seed < best->seed)))) {
      best = &r;
    }
  }
  if (best == nullptr) throw InputError("no runs recorded for method " + std::string(to_string(method)));
  return *best;
}

double aligned_rmse(const LcmParams& a, const LcmParams& b) {
  if (!(a.layout() == b.layout())) throw InputError("aligned_rmse needs parameters with the same K and scheme");
  const int K = a.components();
  if (K > 8) throw InputError("aligned_rmse enumerates K! relabellings and is limited to K <= 8");
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  const auto n = static_cast<double>(a.layout().size());
  double best = std::numeric_limits<double>::infinity();
  do {
    const LcmParams p = a.permuted(order);
    best = std::min(best, (p.pack().values - b.pack().values).squaredNorm());
  } while (std::next_permutation(order.begin(), order.end()));
  return std::sqrt(best / n);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ComparisonReport summarize(const std::vector<RunRecord>& records) {
  ComparisonReport report;
  if (!records.empty()) report.dataset_id = records.front().dataset_id;
  for (const RunRecord& r : records) {
    if (std::find(report.rmse_methods.begin(), report.rmse_methods.end(), r.method) == report.rmse_methods.end()) {
      report.rmse_methods.push_back(r.method);
    }
  }
  for (Method m : report.rmse_methods) {
    MethodSummary s;
    s.method = m;
    std::vector<double> iters;
    double total_wall = 0.0;
    for (const RunRecord& r : records) {
      if (r.method != m) continue;
      ++s.runs;
      s.converged_runs += r.converged ? 1 : 0;
      iters.push_back(r.iterations);
      total_wall += r.wall_seconds;
    }
    const RunRecord& best = best_of(records, m);
    s.best_log_likelihood = best.log_likelihood;
    s.best_iterations = best.iterations;
    s.median_iterations = median(iters);
    s.best_wall_seconds = best.wall_seconds;
    s.seconds_per_iteration = best.iterations > 0 ? best.wall_seconds / best.iterations : 0.0;
    s.mean_wall_seconds = total_wall / s.runs;
    report.summaries.push_back(s);
  }
  const auto nm = static_cast<Eigen::Index>(report.rmse_methods.size());
  report.rmse = Matrix::Zero(nm, nm);
  for (Eigen::Index i = 0; i < nm; ++i) {
    for (Eigen::Index j = i + 1; j < nm; ++j) {
      const double v = aligned_rmse(best_of(records, report.rmse_methods[static_cast<std::size_t>(i)]).params,
                                    best_of(records, report.rmse_methods[static_cast<std::size_t>(j)]).params);
      report.rmse(i, j) = v;
      report.rmse(j, i) = v;
    }
  }
  return report;
}

std::vector<Interval> confidence_report(const RunRecord& record, double level) {
  if (!record.curvature) {
    throw InputError("run record has no curvature matrix (EM runs do not produce one)");
  }
  const Covariance cov = observed_information(*record.curvature, ProductSimplex(record.params.layout()));
  return confidence_intervals(record.params.pack().values, cov, level);
}

}  // namespace lcm
