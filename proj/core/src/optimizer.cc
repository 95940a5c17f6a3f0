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

#include "sparsenode/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sparsenode/adjoint.h"
#include "sparsenode/error.h"

namespace sparsenode {

std::vector<double> project_l1(std::span<const double> v, double M) {
  if (!(M > 0.0)) throw InvalidInput("l1-ball radius must be > 0");
  double norm = 0.0;
  for (double x : v) norm += std::abs(x);
  std::vector<double> out(v.begin(), v.end());
  if (norm <= M) return out;

  std::vector<double> a(v.size());
  std::transform(v.begin(), v.end(), a.begin(),
                 [](double x) { return std::abs(x); });
  std::sort(a.begin(), a.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (size_t j = 0; j < a.size(); ++j) {
    cumsum += a[j];
    const double candidate = (cumsum - M) / static_cast<double>(j + 1);
    if (a[j] - candidate > 0.0) theta = candidate;
  }
  for (double& x : out) {
    const double mag = std::max(std::abs(x) - theta, 0.0);
    x = std::copysign(mag, x);
    if (mag == 0.0) x = 0.0;
  }
  return out;
}

std::vector<double> prox_l1(std::span<const double> v, double tau) {
  if (!(tau >= 0.0)) throw InvalidInput("prox threshold must be >= 0");
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - tau;
    out[i] = mag > 0.0 ? std::copysign(mag, v[i]) : 0.0;
  }
  return out;
}

void AdamParams::validate() const {
  if (!(lr > 0.0)) throw InvalidInput("lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidInput("beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidInput("beta2 must be in [0, 1)");
  if (!(eps > 0.0)) throw InvalidInput("eps must be > 0");
}

double AdamState::denominator(size_t i, const AdamParams& p) const {
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(t));
  return std::sqrt(v[i] / bc2) + p.eps;
}

void adam_step(std::span<double> u, std::span<const double> g,
               AdamState& state, const AdamParams& p) {
  if (state.m.size() != u.size()) {
    state.m.assign(u.size(), 0.0);
    state.v.assign(u.size(), 0.0);
    state.t = 0;
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(p.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(p.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < u.size(); ++i) {
    state.m[i] = p.beta1 * state.m[i] + (1.0 - p.beta1) * g[i];
    state.v[i] = p.beta2 * state.v[i] + (1.0 - p.beta2) * g[i] * g[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    u[i] -= p.lr * mhat / (std::sqrt(vhat) + p.eps);
  }
}

std::string to_string(InitKind kind) {
  return kind == InitKind::kZeros ? "zeros" : "uniform_small";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "zeros") return InitKind::kZeros;
  if (name == "uniform_small") return InitKind::kUniformSmall;
  throw InvalidInput("unknown init '" + name + "'");
}

std::string to_string(ProxScaling scaling) {
  return scaling == ProxScaling::kPlain ? "plain" : "preconditioned";
}

ProxScaling prox_scaling_from_string(const std::string& name) {
  if (name == "plain") return ProxScaling::kPlain;
  if (name == "preconditioned") return ProxScaling::kPreconditioned;
  throw InvalidInput("unknown prox scaling '" + name + "'");
}

void TrainConfig::validate() const {
  adam.validate();
  if (iters < 0) throw InvalidInput("iters must be >= 0");
}

ControlTrajectory initial_control(const TimeGrid& grid, int control_dim,
                                  const TrainConfig& config) {
  ControlTrajectory ctrl(grid, control_dim);
  if (config.init == InitKind::kZeros) return ctrl;
  const double scale = config.init_scale > 0.0
                           ? config.init_scale
                           : 0.1 / std::sqrt(static_cast<double>(control_dim));
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (double& v : ctrl.values()) v = dist(rng);
  return ctrl;
}

TrainResult train(const DynamicsSpec& spec, std::span<const double> x0,
                  const ObjectiveSpec& objective, const TimeGrid& grid,
                  const TrainConfig& config, const TrainObserver& observer) {
  return train_from(spec, x0, objective,
                    initial_control(grid, spec.control_dim(), config), config,
                    observer);
}

TrainResult train_from(const DynamicsSpec& spec, std::span<const double> x0,
                       const ObjectiveSpec& objective, ControlTrajectory ctrl,
                       const TrainConfig& config,
                       const TrainObserver& observer) {
  config.validate();
  objective.validate();
  if (ctrl.control_dim() != spec.control_dim()) {
    throw InvalidInput("initial control does not match the dynamics");
  }
  const int d_u = ctrl.control_dim();
  const double dt = ctrl.grid().dt();
  const double tau = config.adam.lr * objective.penalty_weight * dt;

  // The initial iterate is made admissible before the first evaluation.
  for (int k = 0; k < ctrl.steps(); ++k) {
    const auto p = project_l1(ctrl.point(k), objective.M);
    std::copy(p.begin(), p.end(), ctrl.point(k).begin());
  }

  auto forward = [&](int iter) {
    try {
      return integrate(spec, x0, ctrl, config.scheme);
    } catch (const DivergenceError& e) {
      throw DivergenceError("training diverged at iteration " +
                                std::to_string(iter) + ": " + e.what(),
                            iter);
    }
  };

  AdamState state(ctrl.values().size());
  std::vector<FunctionalValue> history;
  history.reserve(static_cast<size_t>(config.iters) + 1);
  for (int iter = 0; iter < config.iters; ++iter) {
    const StateTrajectory traj = forward(iter);
    history.push_back(functional_J(traj, ctrl, objective));
    const Gradient g = grad_running(spec, traj, ctrl, objective);
    for (double v : g.values) {
      if (!std::isfinite(v)) {
        throw DivergenceError(
            "non-finite gradient at iteration " + std::to_string(iter), iter);
      }
    }
    adam_step(ctrl.values(), g.values, state, config.adam);
    const double bc2 =
        1.0 - std::pow(config.adam.beta2, static_cast<double>(state.t));
    for (int k = 0; k < ctrl.steps(); ++k) {
      std::span<double> uk = ctrl.point(k);
      for (int j = 0; j < d_u; ++j) {
        double t = tau;
        if (config.prox == ProxScaling::kPreconditioned) {
          const size_t i = static_cast<size_t>(k) * d_u + j;
          t /= std::sqrt(state.v[i] / bc2) + config.adam.eps;
        }
        const double mag = std::abs(uk[j]) - t;
        uk[j] = mag > 0.0 ? std::copysign(mag, uk[j]) : 0.0;
      }
      const auto p = project_l1(uk, objective.M);
      std::copy(p.begin(), p.end(), uk.begin());
    }
    if (observer) observer(iter + 1, ctrl);
  }
  StateTrajectory traj = forward(config.iters);
  history.push_back(functional_J(traj, ctrl, objective));
  return TrainResult{std::move(ctrl), std::move(traj), std::move(history)};
}

}  // namespace sparsenode
