#include <benchmark/benchmark.h>

#include "lcm/bench.hpp"
#include "lcm/simulator.hpp"

namespace {

using namespace lcm;

// One full fit from a fixed initial point; iterations are reported as a counter.
void fit_bundle(benchmark::State& state, Method method) {
  const BundleSpec& b = bundle_registry()[static_cast<std::size_t>(state.range(0))];
  const Dataset data = sample(b.params, b.n, 2026);
  const LcmParams init = restart_init(b.params.layout(), 2026, 0);
  const SolverSettings settings;
  int iterations = 0;
  for (auto _ : state) {
    const RunRecord r = run_method(method, data, init, settings, 7);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.log_likelihood);
  }
  state.counters["iterations"] = iterations;
  state.SetLabel(b.id);
}

void BM_FitEm(benchmark::State& state) { fit_bundle(state, Method::em); }
void BM_FitSqp(benchmark::State& state) { fit_bundle(state, Method::sqp); }
void BM_FitPqn(benchmark::State& state) { fit_bundle(state, Method::pqn); }

BENCHMARK(BM_FitEm)->Arg(0)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitSqp)->Arg(0)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitPqn)->Arg(0)->Arg(6)->Arg(11)->Unit(benchmark::kMillisecond);

}  // namespace
