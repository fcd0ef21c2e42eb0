// Serial reference vs OpenMP kernels on the canonical equilibrium plus
// a full perturbation. Run with OMP_NUM_THREADS set to taste.

#include <benchmark/benchmark.h>

#include "remx/diagnostics.hpp"
#include "remx/init.hpp"
#include "remx/integrator.hpp"
#include "remx/kernels.hpp"

using namespace remx;

namespace {

struct Setup {
  Model model = make_ideal_model(1, 1.5, 1, 1, 1);
  Equilibrium eq = make_equilibrium(1, 1, {0.5, 0.5, 0}, model.rad);
  FieldGrid grid;

  explicit Setup(int n) {
    PerturbationSpec spec;
    spec.fields[kPertRho] = {0.01, {1, 1, 0}, 0.0};
    spec.fields[kPertU1] = {0.01, {1, 0, 0}, 0.3};
    spec.fields[kPertTheta] = {0.01, {0, 1, 0}, 0.7};
    spec.fields[kPertA3] = {0.002, {1, 1, 0}, 0.5};
    grid = init_fields(GridShape{2, {n, n, 1}, {1, 1, 1}}, model, eq, spec);
  }
};

Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? Exec::parallel : Exec::serial;
}

void BM_HyperbolicRhs(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const Exec exec = exec_of(state);
  std::vector<PrimitiveState> prim;
  std::vector<ConservedState> rhs;
  compute_primitives(s.grid, s.model.matter(), prim, exec);
  for (auto _ : state) {
    hyperbolic_rhs(s.grid, prim, s.model, Reconstruction::linear, rhs, exec);
    benchmark::DoNotOptimize(rhs.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size()));
}

void BM_StrangStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  StepperOptions opt;
  opt.exec = exec_of(state);
  Stepper stepper(s.model, opt);
  for (auto _ : state) {
    stepper.strang_step(s.grid, 1e-4);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.grid.size()));
}

void BM_Diagnostics(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  const Exec exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure(s.grid, s.model, s.eq, 0.0, 0, exec));
  }
}

}  // namespace

BENCHMARK(BM_HyperbolicRhs)->ArgsProduct({{64, 256}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_StrangStep)->ArgsProduct({{64, 256}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_Diagnostics)->ArgsProduct({{64, 256}, {0, 1}})->ArgNames({"n", "parallel"});

BENCHMARK_MAIN();
