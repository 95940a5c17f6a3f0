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

#ifndef SPARSENODE_OBJECTIVE_H_
#define SPARSENODE_OBJECTIVE_H_

#include <span>
#include <string>
#include <vector>

#include "sparsenode/integrator.h"

namespace sparsenode {

enum class LossKind { kLeastSquares, kCrossEntropy };
enum class Quadrature { kLeft, kTrapezoid };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);
std::string to_string(Quadrature rule);
Quadrature quadrature_from_string(const std::string& name);

// Fixed affine read-out z = P x_i + q mapping a sample state in R^d to R^m.
struct OutputMap {
  int m = 1;
  int d = 1;
  std::vector<double> P;  // row-major m x d
  std::vector<double> q;  // m

  static OutputMap Identity(int d);
  void apply(std::span<const double> x, std::span<double> z) const;
};

struct ObjectiveSpec {
  LossKind loss = LossKind::kLeastSquares;
  OutputMap output;
  std::vector<int> classes;     // cross_entropy: one class index per sample
  std::vector<double> targets;  // least_squares: n x m row-major
  double M = 1.0;
  Quadrature quadrature = Quadrature::kLeft;
  double penalty_weight = 1.0;

  int samples() const;
  // Throws InvalidInput on M <= 0, negative penalty weight, label count or
  // class range mismatches.
  void validate() const;
};

// Cross-entropy with the max-shifted log-sum-exp. Throws InvalidInput if y
// is outside [0, m).
double cross_entropy(std::span<const double> z, int y);
double squared_distance(std::span<const double> z, std::span<const double> y);

// loss(P x_i + q, y_i) for sample i of a stacked state.
double sample_loss(const ObjectiveSpec& spec, std::span<const double> x,
                   int i);

// Empirical error: mean over samples of the loss of the read-out.
double error_E(std::span<const double> x, const ObjectiveSpec& spec);

// Gradient of error_E with respect to the stacked state, added into `grad`
// after multiplication by `scale`.
void error_E_grad(std::span<const double> x, const ObjectiveSpec& spec,
                  double scale, std::span<double> grad);

// Weights w_k such that the discrete running cost is sum_k w_k E(x^k),
// k = 0..n_t. Left rule: dt for k < n_t, 0 at the last node.
std::vector<double> quadrature_weights(const TimeGrid& grid, Quadrature rule);

struct FunctionalValue {
  double J = 0.0;
  double running = 0.0;
  double penalty = 0.0;
};

// Discrete J = running + penalty_weight * sum_k dt |u_k|_1. Throws
// InvalidInput if the two trajectories are on different grids.
FunctionalValue functional_J(const StateTrajectory& traj,
                             const ControlTrajectory& ctrl,
                             const ObjectiveSpec& spec);

// E(x^k) for every node.
std::vector<double> error_profile(const StateTrajectory& traj,
                                  const ObjectiveSpec& spec);

// min_i [ z_i[y_i] - max_{j != y_i} z_i[j] ]. Throws InvalidInput if m < 2.
double margin(std::span<const double> x, const OutputMap& output,
              std::span<const int> classes);

// h(t) = log(1 + (m - 1) exp(-gamma e^t)), the asymptotic-interpolation
// envelope of the cross-entropy error under a positive margin gamma.
double h_bound(double gamma, int m, double t);

// Inverse of h on (0, log m). Throws InvalidInput outside that range or
// for gamma <= 0.
double h_inverse(double gamma, int m, double v);

}  // namespace sparsenode

#endif  // SPARSENODE_OBJECTIVE_H_
