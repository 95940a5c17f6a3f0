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

#ifndef SPARSENODE_INTEGRATOR_H_
#define SPARSENODE_INTEGRATOR_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sparsenode/dynamics.h"

namespace sparsenode {

// Uniform grid on [0, T] with n_t steps.
class TimeGrid {
 public:
  TimeGrid(double T, int n_t);

  double T() const { return T_; }
  int steps() const { return n_t_; }
  double dt() const { return T_ / n_t_; }
  // Node time t_k = k T / n_t, so that t_{n_t} == T exactly.
  double node(int k) const { return T_ * k / n_t_; }

  bool operator==(const TimeGrid& other) const = default;

 private:
  double T_;
  int n_t_;
};

enum class Scheme { kEuler, kMidpoint };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

// Piecewise-constant control: point k is held on [t_k, t_{k+1}).
class ControlTrajectory {
 public:
  ControlTrajectory(TimeGrid grid, int control_dim);
  ControlTrajectory(TimeGrid grid, int control_dim, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  int steps() const { return grid_.steps(); }
  int control_dim() const { return d_u_; }

  std::span<double> point(int k) {
    return {values_.data() + static_cast<size_t>(k) * d_u_,
            static_cast<size_t>(d_u_)};
  }
  std::span<const double> point(int k) const {
    return {values_.data() + static_cast<size_t>(k) * d_u_,
            static_cast<size_t>(d_u_)};
  }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double l1_norm(int k) const;
  // sum_k dt |u_k|_1
  double l1_cost() const;
  // |u_k|_1 <= M + 1e-9 for every step.
  bool admissible(double M) const;

 private:
  TimeGrid grid_;
  int d_u_;
  std::vector<double> values_;
};

// States at every node t_0..t_{n_t}; states[0] is the initial datum.
class StateTrajectory {
 public:
  StateTrajectory(TimeGrid grid, int state_dim, Scheme scheme);

  const TimeGrid& grid() const { return grid_; }
  int state_dim() const { return dim_; }
  Scheme scheme() const { return scheme_; }
  int nodes() const { return grid_.steps() + 1; }

  std::span<double> state(int k) {
    return {values_.data() + static_cast<size_t>(k) * dim_,
            static_cast<size_t>(dim_)};
  }
  std::span<const double> state(int k) const {
    return {values_.data() + static_cast<size_t>(k) * dim_,
            static_cast<size_t>(dim_)};
  }
  const std::vector<double>& values() const { return values_; }

 private:
  TimeGrid grid_;
  int dim_;
  Scheme scheme_;
  std::vector<double> values_;
};

// One step of the scheme from x with control u held constant; writes the
// next state into `next`.
void step(const DynamicsSpec& spec, Scheme scheme, double dt,
          std::span<const double> x, std::span<const double> u,
          std::span<double> next);

// Forward sweep. Throws DivergenceError naming the step that produced a
// non-finite state.
StateTrajectory integrate(const DynamicsSpec& spec, std::span<const double> x0,
                          const ControlTrajectory& ctrl, Scheme scheme);

// Time rescaling of a control given on [0, T0] to [0, T]: the step count is
// kept and every point is multiplied by T0 / T, so dt' u'_k = dt u_k.
ControlTrajectory rescale_control(const ControlTrajectory& ctrl, double T);

// Extends a control on [0, T1] by zeros up to T, on the same step size.
// Throws InvalidInput if T is not a whole number of steps.
ControlTrajectory zero_extend(const ControlTrajectory& ctrl, double T);

// CSV with header "t,u_0,...": one row per step, t = left node.
void write_csv(std::ostream& os, const ControlTrajectory& ctrl);
// CSV with header "t,x_0,...": one row per node.
void write_csv(std::ostream& os, const StateTrajectory& traj);

// The grid is not recoverable from step rows alone; pass the grid of the
// matching state trajectory.
ControlTrajectory read_control_csv(std::istream& is, const TimeGrid& grid);
StateTrajectory read_state_csv(std::istream& is, Scheme scheme);

}  // namespace sparsenode

#endif  // SPARSENODE_INTEGRATOR_H_
