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

#ifndef SPARSENODE_OPTIMIZER_H_
#define SPARSENODE_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sparsenode/dynamics.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"

namespace sparsenode {

// Euclidean projection onto {z : |z|_1 <= M}. Throws InvalidInput if
// M <= 0.
std::vector<double> project_l1(std::span<const double> v, double M);

// Soft threshold sign(v) (|v| - tau)_+. Throws InvalidInput if tau < 0.
std::vector<double> prox_l1(std::span<const double> v, double tau);

struct AdamParams {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t t = 0;

  explicit AdamState(size_t size = 0) : m(size, 0.0), v(size, 0.0) {}

  // sqrt(v_hat_i) + eps for the current step count; the diagonal metric of
  // the last update.
  double denominator(size_t i, const AdamParams& p) const;
};

// One bias-corrected Adam update of u in place using gradient g.
void adam_step(std::span<double> u, std::span<const double> g,
               AdamState& state, const AdamParams& params);

enum class InitKind { kZeros, kUniformSmall };

// How the L1 proximal threshold lr * penalty_weight * dt is applied after an
// Adam step. kPlain uses it as is for every coordinate. kPreconditioned
// divides it by Adam's per-coordinate denominator sqrt(v_hat) + eps, so the
// prox is taken in the same diagonal metric as the gradient step.
enum class ProxScaling { kPlain, kPreconditioned };

std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);
std::string to_string(ProxScaling scaling);
ProxScaling prox_scaling_from_string(const std::string& name);

struct TrainConfig {
  AdamParams adam;
  int iters = 1000;
  uint64_t seed = 0;
  InitKind init = InitKind::kUniformSmall;
  double init_scale = 0.0;  // <= 0: 0.1 / sqrt(d_u)
  Scheme scheme = Scheme::kEuler;
  ProxScaling prox = ProxScaling::kPreconditioned;

  void validate() const;
};

struct TrainResult {
  ControlTrajectory ctrl;
  StateTrajectory traj;
  // history[j] is the functional at iterate j; iters + 1 entries.
  std::vector<FunctionalValue> history;
};

// Called after every iteration with the iteration index (1-based) and the
// new iterate.
using TrainObserver = std::function<void(int, const ControlTrajectory&)>;

ControlTrajectory initial_control(const TimeGrid& grid, int control_dim,
                                  const TrainConfig& config);

// Projected proximal Adam on the discrete functional: per iteration an Adam
// step on the running-cost gradient, a soft threshold realizing the L1
// penalty, then the per-step projection onto the l1 ball of radius M.
// Throws DivergenceError carrying the iteration index when a forward pass or
// gradient turns non-finite.
TrainResult train(const DynamicsSpec& spec, std::span<const double> x0,
                  const ObjectiveSpec& objective, const TimeGrid& grid,
                  const TrainConfig& config,
                  const TrainObserver& observer = {});

// Same, starting from a given control.
TrainResult train_from(const DynamicsSpec& spec, std::span<const double> x0,
                       const ObjectiveSpec& objective, ControlTrajectory ctrl,
                       const TrainConfig& config,
                       const TrainObserver& observer = {});

}  // namespace sparsenode

#endif  // SPARSENODE_OPTIMIZER_H_
