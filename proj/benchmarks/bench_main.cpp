// Copyright 2026 The dielnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include "dielnoise/constants.hpp"
#include "dielnoise/field_solver.hpp"
#include "dielnoise/layered.hpp"
#include "dielnoise/noise.hpp"
#include "dielnoise/presets.hpp"
#include "dielnoise/thermometry.hpp"

using namespace dielnoise;

namespace {

void BM_PlaneValidationSolve(benchmark::State& state) {
  const Scene s = presets::plane_validation_scene(300e-6, Resolution::Coarse);
  const FieldProblem p(s);
  for (auto _ : state) benchmark::DoNotOptimize(p.solve(s.charge.position));
  state.counters["cells"] = static_cast<double>(p.grid().cell_count());
}
BENCHMARK(BM_PlaneValidationSolve)->Unit(benchmark::kMillisecond);

void BM_FiberAxisLoss(benchmark::State& state) {
  const FieldProblem p(presets::fiber_scene(450e-6, presets::FiberSpec{}, -1, Resolution::Coarse));
  for (auto _ : state) benchmark::DoNotOptimize(axis_loss(p, Vec3{0, 0, 1}));
  state.counters["cells"] = static_cast<double>(p.grid().cell_count());
}
BENCHMARK(BM_FiberAxisLoss)->Unit(benchmark::kMillisecond);

void BM_GreenFunctionsSlab(benchmark::State& state) {
  const LayerStack slab = presets::plane_validation_stack();
  const double z = state.range(0) * 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(green_functions(2.0 * constants::pi * 1e6, z, slab));
}
BENCHMARK(BM_GreenFunctionsSlab)->Arg(100)->Arg(600)->Unit(benchmark::kMicrosecond);

void BM_GreenFunctionsCoating(benchmark::State& state) {
  const LayerStack stack = presets::fiber_stack(presets::FiberSpec{});
  for (auto _ : state) benchmark::DoNotOptimize(green_functions(2.0 * constants::pi * 1e6, 300e-6, stack));
}
BENCHMARK(BM_GreenFunctionsCoating)->Unit(benchmark::kMicrosecond);

void BM_RabiSignal(benchmark::State& state) {
  const double nbar = static_cast<double>(state.range(0));
  const std::array<double, 3> eta{0.03, 0.03, 0.097};
  for (auto _ : state) {
    benchmark::DoNotOptimize(rabi_signal(20e-6, {nbar, nbar, nbar}, eta, 2.0 * constants::pi * 100e3));
  }
}
BENCHMARK(BM_RabiSignal)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMicrosecond);

void BM_FitBeta(benchmark::State& state) {
  const ClosedLoopConfig c = closed_loop_defaults();
  const auto sets = synth_experiment(c.rates, c.modes, c.schedule, c.synth);
  for (auto _ : state) benchmark::DoNotOptimize(fit_beta(sets.back()));
}
BENCHMARK(BM_FitBeta)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
