#include "lcm/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace lcm {

namespace {

// Order-independent sum of a few nonnegative terms: summing in sorted order
// makes the result exactly invariant under component relabelling.
double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double component_product(const BlockLayout& layout, const Vector& v, const std::vector<int>& labels, int k) {
  double prod = 1.0;
  const int d = layout.scheme().num_variables();
  for (int j = 0; j < d; ++j) {
    prod *= v[static_cast<Eigen::Index>(layout.pi_index(k, j, labels[static_cast<std::size_t>(j)]))];
  }
  return prod;
}

// f = -L and, when grad != nullptr, its gradient.
double evaluate(const Dataset& data, const PackedVector& packed, Vector* grad) {
  check_compatible(data, packed.layout);
  const BlockLayout& layout = packed.layout;
  const Vector& v = packed.values;
  const int K = layout.components();
  const int d = layout.scheme().num_variables();
  const auto Kz = static_cast<std::size_t>(K);
  const auto dz = static_cast<std::size_t>(d);

  if (grad != nullptr) grad->setZero(static_cast<Eigen::Index>(layout.size()));

  std::vector<double> weighted(Kz);
  std::vector<double> scratch(Kz);
  std::vector<double> factors(dz);
  std::vector<double> prefix(dz + 1);
  std::vector<double> suffix(dz + 1);

  double loglik = 0.0;
  for (const Pattern& p : data.patterns()) {
    for (int k = 0; k < K; ++k) {
      weighted[static_cast<std::size_t>(k)] = v[k] * component_product(layout, v, p.labels, k);
    }
    scratch = weighted;
    const double mixture = sorted_sum(scratch);
    loglik += p.count * std::log(std::max(mixture, kLogFloor));

    if (grad == nullptr) continue;
    const double scale = p.count / std::max(mixture, kGradientFloor);
    for (int k = 0; k < K; ++k) {
      // Leave-one-out products avoid dividing by pi entries that may be zero.
      for (int j = 0; j < d; ++j) {
        factors[static_cast<std::size_t>(j)] =
            v[static_cast<Eigen::Index>(layout.pi_index(k, j, p.labels[static_cast<std::size_t>(j)]))];
      }
      prefix[0] = 1.0;
      for (std::size_t j = 0; j < dz; ++j) prefix[j + 1] = prefix[j] * factors[j];
      suffix[dz] = 1.0;
      for (std::size_t j = dz; j-- > 0;) suffix[j] = suffix[j + 1] * factors[j];

      (*grad)[k] -= scale * prefix[dz];
      const double eta_k = v[k];
      for (int j = 0; j < d; ++j) {
        const auto jz = static_cast<std::size_t>(j);
        const auto idx = static_cast<Eigen::Index>(layout.pi_index(k, j, p.labels[jz]));
        (*grad)[idx] -= scale * eta_k * prefix[jz] * suffix[jz + 1];
      }
    }
  }
  return -loglik;
}

}  // namespace

void check_compatible(const Dataset& data, const BlockLayout& layout) {
  if (!(data.scheme() == layout.scheme())) {
    throw InputError("dataset category scheme does not match the parameter layout");
  }
}

double component_density(std::span<const int> y, int k, const LcmParams& params) {
  const CategoryScheme& scheme = params.scheme();
  if (static_cast<int>(y.size()) != scheme.num_variables()) {
    throw InputError("observation length does not match the number of variables");
  }
  if (k < 0 || k >= params.components()) throw InputError("component index out of range");
  double prod = 1.0;
  for (int j = 0; j < scheme.num_variables(); ++j) {
    const int label = y[static_cast<std::size_t>(j)];
    if (label < 1 || label > scheme.categories(j)) {
      throw InputError("category label " + std::to_string(label) + " out of range for variable " +
                       std::to_string(j + 1));
    }
    prod *= params.pi(k, j, label - 1);
  }
  return prod;
}

double log_likelihood(const Dataset& data, const LcmParams& params) { return -evaluate(data, params.pack(), nullptr); }

double log_likelihood(const Dataset& data, const PackedVector& packed) { return -evaluate(data, packed, nullptr); }

PackedVector gradient(const Dataset& data, const LcmParams& params) {
  return PackedVector(params.layout(), log_likelihood_gradient(data, params.pack()));
}

Vector log_likelihood_gradient(const Dataset& data, const PackedVector& packed) {
  Vector g;
  evaluate(data, packed, &g);
  return -g;
}

Vector central_difference(const std::function<double(const Vector&)>& fn, const Vector& x, double h) {
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  Vector out(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = fn(probe);
    probe[i] = x[i] - h;
    const double down = fn(probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

PackedVector finite_difference_gradient(const Dataset& data, const PackedVector& packed, double h) {
  auto fn = [&](const Vector& x) { return log_likelihood(data, PackedVector(packed.layout, x)); };
  return PackedVector(packed.layout, central_difference(fn, packed.values, h));
}

Matrix pattern_responsibilities(const Dataset& data, const PackedVector& packed) {
  check_compatible(data, packed.layout);
  const BlockLayout& layout = packed.layout;
  const Vector& v = packed.values;
  const int K = layout.components();
  const auto& patterns = data.patterns();
  Matrix R(static_cast<Eigen::Index>(patterns.size()), K);
  std::vector<double> terms(static_cast<std::size_t>(K));
  std::vector<double> scratch;

  for (std::size_t p = 0; p < patterns.size(); ++p) {
    const auto row = static_cast<Eigen::Index>(p);
    for (int k = 0; k < K; ++k) {
      terms[static_cast<std::size_t>(k)] = v[k] * component_product(layout, v, patterns[p].labels, k);
    }
    scratch = terms;
    const double total = sorted_sum(scratch);
    if (total >= std::numeric_limits<double>::min()) {
      for (int k = 0; k < K; ++k) R(row, k) = terms[static_cast<std::size_t>(k)] / total;
      continue;
    }
    // Underflow: redo the quotient in log space.
    std::vector<double> logs(static_cast<std::size_t>(K));
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      double lg = std::log(v[k]);
      for (int j = 0; j < layout.scheme().num_variables(); ++j) {
        lg += std::log(v[static_cast<Eigen::Index>(
            layout.pi_index(k, j, patterns[p].labels[static_cast<std::size_t>(j)]))]);
      }
      logs[static_cast<std::size_t>(k)] = lg;
      top = std::max(top, lg);
    }
    if (!std::isfinite(top)) {
      R.row(row).setConstant(1.0 / K);
      continue;
    }
    for (int k = 0; k < K; ++k) terms[static_cast<std::size_t>(k)] = std::exp(logs[static_cast<std::size_t>(k)] - top);
    scratch = terms;
    const double shifted = sorted_sum(scratch);
    for (int k = 0; k < K; ++k) R(row, k) = terms[static_cast<std::size_t>(k)] / shifted;
  }
  return R;
}

Responsibilities responsibilities(const Dataset& data, const LcmParams& params) {
  const Matrix R = pattern_responsibilities(data, params.pack());
  Responsibilities out{Matrix(static_cast<Eigen::Index>(data.size()), params.components())};
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.D.row(static_cast<Eigen::Index>(i)) = R.row(static_cast<Eigen::Index>(data.pattern_of(i)));
  }
  return out;
}

double negative_objective(const Dataset& data, const PackedVector& packed) { return evaluate(data, packed, nullptr); }

Vector negative_objective_gradient(const Dataset& data, const PackedVector& packed) {
  Vector g;
  evaluate(data, packed, &g);
  return g;
}

double negative_objective_with_gradient(const Dataset& data, const PackedVector& packed, Vector& grad) {
  return evaluate(data, packed, &grad);
}

}  // namespace lcm
