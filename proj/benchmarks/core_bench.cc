// Copyright 2026 The sparsenode Authors.
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


#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sparsenode/adjoint.h"
#include "sparsenode/datagen.h"
#include "sparsenode/optimizer.h"

namespace sparsenode {
namespace {

struct Problem {
  Dataset data;
  DynamicsSpec spec;
  ObjectiveSpec obj;
  ControlTrajectory ctrl;
};

Problem circles_problem(int n, int n_t) {
  Dataset data = augment_zero(gen_circles(n, 1.0, 3.0, 0.05, 1));
  DynamicsSpec spec = DynamicsSpec::Inside(3, n, Activation::Tanh());
  ObjectiveSpec obj;
  obj.loss = LossKind::kCrossEntropy;
  obj.output.m = 2;
  obj.output.d = 3;
  obj.output.P = {1, 0, 0, 0, 1, 0};
  obj.output.q = {0, 0};
  obj.classes = data.classes;
  obj.M = 8;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  std::vector<double> u(static_cast<size_t>(n_t) * spec.control_dim());
  for (double& v : u) v = dist(rng);
  ControlTrajectory ctrl(TimeGrid(5.0, n_t), spec.control_dim(), std::move(u));
  return {std::move(data), std::move(spec), std::move(obj), std::move(ctrl)};
}

void BM_Integrate(benchmark::State& state) {
  const Problem p = circles_problem(static_cast<int>(state.range(0)), 15);
  const Scheme scheme = state.range(1) ? Scheme::kMidpoint : Scheme::kEuler;
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(p.spec, p.data.xs, p.ctrl, scheme));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Integrate)->ArgsProduct({{200, 3000}, {0, 1}});

void BM_GradRunning(benchmark::State& state) {
  const Problem p = circles_problem(static_cast<int>(state.range(0)), 15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        grad_running(p.spec, p.data.xs, p.ctrl, p.obj, Scheme::kMidpoint));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GradRunning)->Arg(200)->Arg(3000);

void BM_ProjectL1(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> dist;
  std::vector<double> v(static_cast<size_t>(state.range(0)));
  for (double& x : v) x = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1(v, 1.0));
}
BENCHMARK(BM_ProjectL1)->Arg(12)->Arg(1000);

void BM_TrainIteration(benchmark::State& state) {
  const Problem p = circles_problem(200, 15);
  TrainConfig cfg;
  cfg.iters = 1;
  cfg.scheme = Scheme::kMidpoint;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_from(p.spec, p.data.xs, p.obj, p.ctrl, cfg));
  }
}
BENCHMARK(BM_TrainIteration);

}  // namespace
}  // namespace sparsenode

BENCHMARK_MAIN();
