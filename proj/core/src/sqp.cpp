#include "lcm/sqp.hpp"

#include "lcm/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcm {

void SqpConfig::validate() const {
  if (!(kkt_tol > 0.0)) throw InputError("SQP kkt_tol must be positive");
  if (max_iter < 0) throw InputError("SQP max_iter must be nonnegative");
  if (max_line_search < 1) throw InputError("SQP max_line_search must be at least 1");
  if (qp_active_set_max < 1) throw InputError("SQP qp_active_set_max must be at least 1");
  if (!(armijo > 0.0 && armijo < 1.0)) throw InputError("SQP armijo constant must lie in (0, 1)");
}

double merit_value(double f_value, const Vector& theta, const Penalty& rho, const ProductSimplex& geom) {
  if (static_cast<std::size_t>(theta.size()) != geom.size() ||
      static_cast<std::size_t>(rho.equality.size()) != geom.blocks().size() || rho.bounds.size() != theta.size()) {
    throw InputError("merit function inputs do not match the product simplex");
  }
  double phi = f_value;
  for (std::size_t b = 0; b < geom.blocks().size(); ++b) {
    const Block& blk = geom.blocks()[b];
    const double c = theta.segment(static_cast<Eigen::Index>(blk.offset), static_cast<Eigen::Index>(blk.length)).sum() - 1.0;
    phi += rho.equality[static_cast<Eigen::Index>(b)] * std::abs(c);
  }
  for (Eigen::Index i = 0; i < theta.size(); ++i) phi += rho.bounds[i] * std::abs(std::min(0.0, theta[i]));
  return phi;
}

Vector update_penalty(const Vector& rho_prev, const Vector& mu) {
  if (rho_prev.size() != mu.size()) throw InputError("penalty and multiplier vectors differ in length");
  Vector out(rho_prev.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double m = std::abs(mu[i]);
    out[i] = std::max(0.5 * (rho_prev[i] + m), m);
  }
  return out;
}

DampedUpdate damped_bfgs_update(const Matrix& B, const Vector& s, const Vector& eta) {
  DampedUpdate out;
  out.B = B;
  const Vector Bs = B * s;
  out.sBs = s.dot(Bs);
  if (!(out.sBs > 1e-14)) {
    out.positive_definite = Eigen::LLT<Matrix>(B).info() == Eigen::Success;
    return out;
  }
  const double s_eta = s.dot(eta);
  out.gamma = s_eta >= 0.2 * out.sBs ? 1.0 : 0.8 * out.sBs / (out.sBs - s_eta);
  const Vector q = out.gamma * eta + (1.0 - out.gamma) * Bs;
  out.qs = q.dot(s);
  Matrix next = B + (q * q.transpose()) / out.qs - (Bs * Bs.transpose()) / out.sBs;
  next = 0.5 * (next + next.transpose());
  out.positive_definite = Eigen::LLT<Matrix>(next).info() == Eigen::Success;
  if (out.positive_definite) {
    out.B = std::move(next);
    out.applied = true;
  }
  return out;
}

double kkt_residual(const Vector& theta, const Vector& g, const Vector& lambda, const ProductSimplex& geom) {
  double worst = 0.0;
  double violation = 0.0;
  for (std::size_t b = 0; b < geom.blocks().size(); ++b) {
    const Block& blk = geom.blocks()[b];
    const double lam = lambda[static_cast<Eigen::Index>(b)];
    double sum = 0.0;
    for (std::size_t i = blk.offset; i < blk.offset + blk.length; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      worst = std::max(worst, std::abs(std::min(theta[ii], g[ii] - lam)));
      violation = std::max(violation, -theta[ii]);
      sum += theta[ii];
    }
    violation = std::max(violation, std::abs(sum - 1.0));
  }
  return worst + violation;
}

Vector first_order_multipliers(const Vector& theta, const Vector& g, const ProductSimplex& geom) {
  Vector lambda(static_cast<Eigen::Index>(geom.blocks().size()));
  for (std::size_t b = 0; b < geom.blocks().size(); ++b) {
    const Block& blk = geom.blocks()[b];
    double sum = 0.0;
    double all = 0.0;
    int count = 0;
    for (std::size_t i = blk.offset; i < blk.offset + blk.length; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      all += g[ii];
      if (theta[ii] > 0.0) {
        sum += g[ii];
        ++count;
      }
    }
    lambda[static_cast<Eigen::Index>(b)] = count > 0 ? sum / count : all / static_cast<double>(blk.length);
  }
  return lambda;
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
SqpRawResult run_sqp(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                     const SqpConfig& cfg, OnStep&& on_step) {
  cfg.validate();
  const auto n = x0.size();
  const auto nb = static_cast<Eigen::Index>(geom.blocks().size());
  SqpRawResult out;
  out.x = x0;
  out.status = "max_iter reached";
  out.B = Matrix::Identity(n, n);
  out.lambda = Vector::Zero(nb);
  out.rho = Penalty{Vector::Zero(nb), Vector::Zero(n)};
  out.diagnostics.min_bound_slack = std::numeric_limits<double>::infinity();
  Vector& theta = out.x;

  double f = objective.value(theta);
  Vector g = objective.gradient(theta);
  on_step(StepInfo{0, theta, f, 0.0, 0.0});

  int t = 0;
  bool reset = false;
  bool identity_scale_pending = cfg.scale_initial_matrix;
  for (;;) {
    const QpSolution qp = solve_simplex_qp(out.B, g, theta, geom, cfg.qp_active_set_max);
    for (const Block& b : geom.blocks()) {
      const double sum = qp.d.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.length)).sum();
      out.diagnostics.max_qp_residual = std::max(out.diagnostics.max_qp_residual, std::abs(sum));
    }
    out.diagnostics.min_bound_slack = std::min(out.diagnostics.min_bound_slack, (theta + qp.d).minCoeff());
    out.lambda = qp.lambda;

    // The QP multipliers carry a B d term that stalls at rounding level once
    // d is tiny, so stationarity is measured with multipliers taken from g.
    if (kkt_residual(theta, g, first_order_multipliers(theta, g, geom), geom) <= cfg.kkt_tol) {
      out.converged = true;
      out.status = "converged";
      break;
    }
    if (t >= cfg.max_iter) break;

    out.rho.equality = update_penalty(out.rho.equality, qp.lambda);
    out.rho.bounds = update_penalty(out.rho.bounds, qp.mu);

    const Vector& d = qp.d;
    const double phi0 = merit_value(f, theta, out.rho, geom);
    // Directional derivative of the merit function along d: the QP direction
    // keeps the linear constraints satisfied, so only the violation at theta
    // contributes beyond g^T d.
    const double derivative = g.dot(d) - (phi0 - f);
    bool accepted = false;
    double alpha = 1.0;
    double f_next = f;
    Vector next;
    const double slack = rounding_slack(phi0);
    if (derivative < 0.0) {
      for (int trial = 0; trial < cfg.max_line_search; ++trial, alpha *= 0.5) {
        next = theta + alpha * d;
        f_next = objective.value(next);
        if (std::isfinite(f_next) &&
            merit_value(f_next, next, out.rho, geom) <= phi0 + cfg.armijo * alpha * derivative + slack) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      if (!reset) {
        out.B.setIdentity();
        identity_scale_pending = cfg.scale_initial_matrix;
        reset = true;
        continue;
      }
      out.status = derivative < 0.0 ? "line search failed" : "no descent direction";
      break;
    }
    reset = false;

    Vector g_next = objective.gradient(next);
    const Vector s = next - theta;
    const Vector eta = g_next - g;
    if (identity_scale_pending) {
      // Gradients scale with the sample size, so the unit starting matrix is
      // rescaled to the curvature seen along the first step before updating.
      const double s_eta = s.dot(eta);
      if (s_eta > 0.0) out.B = (eta.squaredNorm() / s_eta) * Matrix::Identity(n, n);
      identity_scale_pending = false;
    }
    const DampedUpdate upd = damped_bfgs_update(out.B, s, eta);
    if (upd.applied) {
      ++out.diagnostics.updates_applied;
      out.diagnostics.min_damping_ratio = std::min(out.diagnostics.min_damping_ratio, upd.qs / (0.2 * upd.sBs));
      out.B = upd.B;
    } else {
      ++out.diagnostics.updates_skipped;
      if (!upd.positive_definite) ++out.diagnostics.cholesky_failures;
    }
    theta = std::move(next);
    g = std::move(g_next);
    f = f_next;
    ++t;
    on_step(StepInfo{t, theta, f, alpha, s.lpNorm<1>()});
  }
  out.iterations = t;
  return out;
}

}  // namespace

SqpRawResult minimize_sqp(const SmoothObjective& objective, const Vector& x0, const ProductSimplex& geom,
                          const SqpConfig& cfg) {
  std::vector<Vector> iterates;
  SqpRawResult out = run_sqp(objective, x0, geom, cfg, [&](const StepInfo& s) { iterates.push_back(s.x); });
  out.iterates = std::move(iterates);
  return out;
}

SqpResult fit_sqp(const Dataset& data, const LcmParams& init, const SqpConfig& cfg) {
  check_compatible(data, init.layout());
  const Stopwatch clock;
  const BlockLayout& layout = init.layout();
  const ProductSimplex geom(layout);
  const SmoothObjective objective{
      [&](const Vector& x) { return negative_objective(data, PackedVector(layout, x)); },
      [&](const Vector& x) { return negative_objective_gradient(data, PackedVector(layout, x)); }};

  FitResult fit;
  fit.method = Method::sqp;
  auto record = [&](const StepInfo& s) {
    fit.trace.entries.push_back(
        {s.iteration, -s.value, s.alpha, s.change, feasibility_residual(layout, s.x), clock.seconds()});
  };
  SqpRawResult raw = run_sqp(objective, init.pack().values, geom, cfg, record);

  // Linearised equalities hold up to rounding; snap back onto the simplexes.
  const Vector final_theta = project_product(raw.x, geom);
  fit.iterations = raw.iterations;
  fit.converged = raw.converged;
  fit.status = raw.status;
  fit.params = LcmParams::from_packed(PackedVector(layout, final_theta));
  fit.log_likelihood = log_likelihood(data, fit.params);
  fit.curvature = raw.B;
  return SqpResult{std::move(fit), std::move(raw.B), std::move(raw.lambda), std::move(raw.rho), raw.diagnostics};
}

}  // namespace lcm
