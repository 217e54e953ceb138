#include "lcm/em.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lcm {

void EmConfig::validate() const {
  if (!(epsilon > 0.0)) throw InputError("EM epsilon must be positive");
  if (max_iter < 1) throw InputError("EM max_iter must be at least 1");
}

namespace {

// One M-step from pattern-level responsibilities R (patterns x K).
Vector m_step(const Dataset& data, const BlockLayout& layout, const Matrix& R) {
  const int K = layout.components();
  const int d = layout.scheme().num_variables();
  const auto& patterns = data.patterns();
  Vector next = Vector::Zero(static_cast<Eigen::Index>(layout.size()));

  Vector mass = Vector::Zero(K);
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto row = static_cast<Eigen::Index>(p);
    for (int k = 0; k < K; ++k) {
      const double w = patterns[p].count * R(row, k);
      mass[k] += w;
      for (int j = 0; j < d; ++j) {
        next[static_cast<Eigen::Index>(layout.pi_index(k, j, patterns[p].labels[static_cast<std::size_t>(j)]))] += w;
      }
    }
  }
  const double n = static_cast<double>(data.size());
  for (int k = 0; k < K; ++k) next[k] = mass[k] / n;
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < d; ++j) {
      const Block b = layout.pi_block(k, j);
      auto seg = next.segment(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.length));
      if (mass[k] <= kComponentMassFloor) {
        seg.setConstant(1.0 / static_cast<double>(b.length));
      } else {
        seg /= mass[k];
      }
    }
  }
  return next;
}

// L1 distance summed in sorted order so relabelled runs see identical values.
double l1_change(const Vector& a, const Vector& b) {
  std::vector<double> diffs(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) diffs[static_cast<std::size_t>(i)] = std::abs(a[i] - b[i]);
  std::sort(diffs.begin(), diffs.end());
  double total = 0.0;
  for (double x : diffs) total += x;
  return total;
}

}  // namespace

Vector m_step_weights(const Responsibilities& resp) {
  const auto n = static_cast<double>(resp.D.rows());
  if (resp.D.rows() == 0) throw InputError("responsibilities are empty");
  return resp.D.colwise().sum().transpose() / n;
}

std::vector<std::vector<Vector>> m_step_categorical(const Dataset& data, const Responsibilities& resp) {
  if (static_cast<std::size_t>(resp.D.rows()) != data.size()) {
    throw InputError("responsibilities have a different number of rows than the dataset");
  }
  const auto K = static_cast<int>(resp.D.cols());
  const CategoryScheme& scheme = data.scheme();
  const int d = scheme.num_variables();
  std::vector<std::vector<Vector>> pi(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    auto& comp = pi[static_cast<std::size_t>(k)];
    const double mass = resp.D.col(k).sum();
    for (int j = 0; j < d; ++j) {
      Vector row = Vector::Zero(scheme.categories(j));
      if (mass <= kComponentMassFloor) {
        row.setConstant(1.0 / scheme.categories(j));
      } else {
        for (std::size_t i = 0; i < data.size(); ++i) row[data.at(i, j) - 1] += resp.D(static_cast<Eigen::Index>(i), k);
        row /= mass;
      }
      comp.push_back(std::move(row));
    }
  }
  return pi;
}

FitResult fit_em(const Dataset& data, const LcmParams& init, const EmConfig& cfg) {
  cfg.validate();
  check_compatible(data, init.layout());
  const Stopwatch clock;
  const BlockLayout& layout = init.layout();

  Vector theta = init.pack().values;
  FitResult out;
  out.method = Method::em;
  out.status = "max_iter reached";
  double loglik = log_likelihood(data, init.pack());
  out.trace.entries.push_back({0, loglik, 0.0, 0.0, feasibility_residual(layout, theta), clock.seconds()});

  int t = 0;
  while (t < cfg.max_iter) {
    ++t;
    const Matrix R = pattern_responsibilities(data, PackedVector(layout, theta));
    Vector next = m_step(data, layout, R);
    const double delta = l1_change(next, theta);
    theta = std::move(next);
    loglik = log_likelihood(data, PackedVector(layout, theta));
    out.trace.entries.push_back({t, loglik, 1.0, delta, feasibility_residual(layout, theta), clock.seconds()});
    if (delta <= cfg.epsilon) {
      out.converged = true;
      out.status = "converged";
      break;
    }
  }

  out.iterations = t;
  out.params = LcmParams::from_packed(PackedVector(layout, theta));
  out.log_likelihood = loglik;
  return out;
}

}  // namespace lcm
