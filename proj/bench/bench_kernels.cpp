#include <benchmark/benchmark.h>

#include <cmath>

#include "qnls/kernels.hpp"

namespace {

using qnls::kernels::Exec;

struct Setup {
  qnls::GridPtr grid;
  std::vector<double> u;
  std::vector<double> u2;
  qnls::PotentialModel V = qnls::potentials::shifted_lorentz(2.0, 1.0, 1.0);
  qnls::kernels::SampledPotential sampled;

  explicit Setup(std::size_t n) : grid(qnls::build_grid(3, 30.0, n)) {
    u.resize(n);
    u2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = grid->node(i);
      u[i] = 2.0 / std::cosh(r);
      u2[i] = u[i] * u[i];
    }
    u.back() = u2.back() = 0.0;
    sampled = qnls::kernels::sample_potential(*grid, V);
  }
};

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_Moments(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnls::kernels::moments(*s.grid, s.u, s.sampled, 2.0, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EnergyGradient(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(s.u.size());
  for (auto _ : state) {
    qnls::kernels::energy_gradient(*s.grid, s.u, s.sampled, 2.0, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DilatedPotential(benchmark::State& state) {
  const Setup s(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qnls::kernels::dilated_potential(*s.grid, s.u2, s.V, 1.3, exec_of(state)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {801L, 1L << 14, 1L << 18, 1L << 20}) {
    b->Args({n, 0});
    b->Args({n, 1});
  }
  b->ArgNames({"n", "parallel"});
}

}  // namespace

BENCHMARK(BM_Moments)->Apply(sizes);
BENCHMARK(BM_EnergyGradient)->Apply(sizes);
BENCHMARK(BM_DilatedPotential)->Apply(sizes);

BENCHMARK_MAIN();
