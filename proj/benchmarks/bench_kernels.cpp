#include <benchmark/benchmark.h>

#include "lcm/lbfgs.hpp"
#include "lcm/model.hpp"
#include "lcm/qp.hpp"
#include "lcm/simplex.hpp"
#include "lcm/simulator.hpp"

namespace {

using namespace lcm;

Vector random_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
  return v;
}

void BM_ProjectSimplex(benchmark::State& state) {
  Rng rng(1);
  const Vector x = random_vector(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(project_simplex(x));
}
BENCHMARK(BM_ProjectSimplex)->RangeMultiplier(4)->Range(4, 256);

void BM_LogLikelihoodAndGradient(benchmark::State& state) {
  const BundleSpec& b = bundle_registry()[static_cast<std::size_t>(state.range(0))];
  const Dataset data = sample(b.params, b.n, 3);
  Vector grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(negative_objective_with_gradient(data, b.params.pack(), grad));
  }
  state.SetLabel(b.id);
}
BENCHMARK(BM_LogLikelihoodAndGradient)->DenseRange(0, 15, 5);

void BM_LbfgsApply(benchmark::State& state) {
  const Eigen::Index n = 60;
  Rng rng(2);
  LbfgsMemory memory(static_cast<std::size_t>(state.range(0)));
  for (int t = 0; t < 20; ++t) {
    const Vector s = random_vector(rng, n);
    memory.update(s, 2.0 * s + 0.1 * random_vector(rng, n));
  }
  const Vector v = random_vector(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(memory.apply(v));
}
BENCHMARK(BM_LbfgsApply)->Arg(5)->Arg(20);

void BM_SimplexQp(benchmark::State& state) {
  const BundleSpec& b = find_bundle("4D");
  const ProductSimplex geom(b.params.layout());
  const auto n = static_cast<Eigen::Index>(geom.size());
  Rng rng(4);
  const Matrix M = Matrix::Random(n, n);
  const Matrix B = M * M.transpose() + Matrix::Identity(n, n);
  const Vector g = 100.0 * random_vector(rng, n);
  const Vector theta = b.params.pack().values;
  for (auto _ : state) benchmark::DoNotOptimize(solve_simplex_qp(B, g, theta, geom));
}
BENCHMARK(BM_SimplexQp);

}  // namespace
