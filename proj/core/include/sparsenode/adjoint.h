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

#ifndef SPARSENODE_ADJOINT_H_
#define SPARSENODE_ADJOINT_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "sparsenode/dynamics.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"

namespace sparsenode {

// Per-step gradient of the smooth part of the discrete functional; same
// layout as ControlTrajectory.
struct Gradient {
  int steps = 0;
  int control_dim = 0;
  std::vector<double> values;

  std::span<const double> step(int k) const {
    return {values.data() + static_cast<size_t>(k) * control_dim,
            static_cast<size_t>(control_dim)};
  }
  double max_abs() const;
};

// Discrete running cost sum_k w_k E(x^k) for the objective's quadrature.
double running_cost(const DynamicsSpec& spec, std::span<const double> x0,
                    const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                    Scheme scheme);

// Exact gradient of the discrete running cost with respect to every u_k,
// by a reverse sweep through the scheme's update map. The L1 penalty is
// not included. Throws DivergenceError on a non-finite adjoint.
Gradient grad_running(const DynamicsSpec& spec, std::span<const double> x0,
                      const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                      Scheme scheme);

// Same, reusing an already computed forward trajectory.
Gradient grad_running(const DynamicsSpec& spec, const StateTrajectory& traj,
                      const ControlTrajectory& ctrl, const ObjectiveSpec& obj);

// Central differences of running_cost, coordinate by coordinate.
Gradient grad_fd(const DynamicsSpec& spec, std::span<const double> x0,
                 const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                 Scheme scheme, double h = 1e-5);

// sign(u) componentwise, 0 at 0.
std::vector<double> l1_subgradient(std::span<const double> u);

// CSV "k,t,grad_l2,grad_max" with one row per step.
void write_gradient_norms_csv(std::ostream& os, const Gradient& g,
                              const TimeGrid& grid);

}  // namespace sparsenode

#endif  // SPARSENODE_ADJOINT_H_
