#include "lcm/pqn.hpp"

#include <cmath>

#include "lcm/line_search.hpp"

namespace lcm {

void PqnConfig::validate() const {
  if (!(epsilon > 0.0)) throw InputError("PQN epsilon must be positive");
  if (memory < 1) throw InputError("PQN memory must be at least 1");
  if (!(nu > 0.0 && nu < 1.0)) throw InputError("PQN nu must lie in (0, 1)");
  if (max_iter < 0) throw InputError("PQN max_iter must be nonnegative");
  if (max_line_search < 1) throw InputError("PQN max_line_search must be at least 1");
  spg.validate();
}

double projected_gradient_residual(const Vector& theta, const Vector& g, const ProductSimplex& geom) {
  return (project_product(Vector(theta - g), geom) - theta).lpNorm<1>();
}

namespace {

struct StepInfo {
  int iteration;
  const Vector& x;
  double value;
  double alpha;
  double change;
};

template <typename OnStep>
PqnRawResult run_pqn(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                     const PqnConfig& cfg, OnStep&& on_step) {
  cfg.validate();
  Rng rng(cfg.seed);
  PqnRawResult out{x0, 0, false, "max_iter reached", {}, LbfgsMemory(cfg.memory, cfg.sigma), LbfgsMemory(cfg.memory, cfg.sigma)};
  Vector& theta = out.x;
  LbfgsMemory& memory = out.memory;

  double f = objective.value(theta);
  Vector g = objective.gradient(theta);
  on_step(StepInfo{0, theta, f, 0.0, 0.0});

  int t = 0;
  bool retried = false;
  for (;;) {
    if (projected_gradient_residual(theta, g, geom) <= cfg.epsilon) {
      out.converged = true;
      out.status = "converged";
      break;
    }
    if (t >= cfg.max_iter) break;

    // On the feasible set g and its tangent part give the same model, but the
    // per-block constant in g is of order N and its products with rounding-level
    // block sums swamp the small decreases SPG has to resolve near a solution.
    // The model is centred at zero rather than f for the same reason.
    const Vector g_tangent = tangent_component(g, geom);
    const QuadraticModel model(0.0, g_tangent, theta, memory);
    const SmoothObjective q{[&](const Vector& x) { return model.value(x); },
                            [&](const Vector& x) { return model.gradient(x); }};
    SpgConfig inner = cfg.spg;
    if (inner.initial_step <= 0.0 && memory.size() > 0) inner.initial_step = 1.0 / memory.sigma();
    const SpgResult sub = spg_solve(q, theta, geom, inner, rng);
    const Vector d = sub.x - theta;
    const double slope = g_tangent.dot(d);

    if (!(slope < 0.0)) {
      // The model gave no descent: restart from a scaled identity once.
      if (retried || memory.size() == 0) {
        out.status = "no descent direction";
        break;
      }
      out.curvature_memory = memory;
      memory.clear();
      retried = true;
      continue;
    }

    auto phi = [&](double a) { return objective.value(theta + a * d); };
    const LineSearchResult ls = armijo_backtrack(phi, f + rounding_slack(f), slope, cfg.nu, cfg.max_line_search, rng);
    if (!ls.success) {
      if (!retried && memory.size() > 0) {
        out.curvature_memory = memory;
        memory.clear();
        retried = true;
        continue;
      }
      out.status = "line search failed";
      break;
    }
    retried = false;

    Vector next = theta + ls.alpha * d;
    Vector g_next = objective.gradient(next);
    const Vector s = next - theta;
    // Per-block constant shifts of the gradient do not change f on the
    // feasible set, so only the tangent part of y carries curvature. Keeping
    // the normal part would inflate y^T y and with it the sigma scaling.
    const Vector y = tangent_component(g_next - g, geom);
    memory.update(s, y);
    theta = std::move(next);
    g = std::move(g_next);
    f = ls.value;
    ++t;
    on_step(StepInfo{t, theta, f, ls.alpha, s.lpNorm<1>()});
  }
  out.iterations = t;
  if (memory.size() > 0 || out.curvature_memory.size() == 0) out.curvature_memory = memory;
  return out;
}

}  // namespace

PqnRawResult minimize_pqn(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                          const PqnConfig& cfg) {
  std::vector<Vector> iterates;
  PqnRawResult out = run_pqn(objective, x0, geom, cfg, [&](const StepInfo& s) { iterates.push_back(s.x); });
  out.iterates = std::move(iterates);
  return out;
}

PqnResult fit_pqn(const Dataset& data, const LcmParams& init, const PqnConfig& cfg) {
  check_compatible(data, init.layout());
  const Stopwatch clock;
  const BlockLayout& layout = init.layout();
  const ProductSimplex geom(layout);

  const SmoothObjective objective{
      [&](const Vector& x) { return negative_objective(data, PackedVector(layout, x)); },
      [&](const Vector& x) { return negative_objective_gradient(data, PackedVector(layout, x)); }};

  FitResult fit;
  fit.method = Method::pqn;
  auto record = [&](const StepInfo& s) {
    fit.trace.entries.push_back(
        {s.iteration, -s.value, s.alpha, s.change, feasibility_residual(layout, s.x), clock.seconds()});
  };
  PqnRawResult raw = run_pqn(objective, init.pack().values, geom, cfg, record);

  fit.iterations = raw.iterations;
  fit.converged = raw.converged;
  fit.status = raw.status;
  fit.params = LcmParams::from_packed(PackedVector(layout, raw.x));
  fit.log_likelihood = fit.trace.entries.back().log_likelihood;
  // A retry near the optimum can leave the memory empty after rounding-level
  // line-search failures; the curvature estimate then uses the pairs it had.
  fit.curvature = raw.curvature_memory.dense(static_cast<Eigen::Index>(layout.size()));
  return PqnResult{std::move(fit), std::move(raw.memory)};
}

}  // namespace lcm
