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

#ifndef SPARSENODE_ANALYSIS_H_
#define SPARSENODE_ANALYSIS_H_

#include <span>
#include <string>
#include <vector>

#include "sparsenode/dynamics.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"

namespace sparsenode {

struct StoppingTime {
  double Tstar = 0.0;
  int idx = 0;
  // The first minimizer is the initial node. Sparsity is only meaningful for
  // T* in (0, T].
  bool at_boundary = false;
};

// First node attaining the minimum of `errors` (ties go to the smallest
// index) on the given grid.
StoppingTime detect_Tstar(std::span<const double> errors, const TimeGrid& grid);
StoppingTime detect_Tstar(const StateTrajectory& traj, const ObjectiveSpec& obj);

enum class StepClass { kSaturated, kZero, kIntermediate };

std::string to_string(StepClass c);

struct SaturationThresholds {
  double eps_sat = 0.05;
  double eps_zero = 1e-3;
};

// Step k is saturated if |u_k|_1 >= (1 - eps_sat) M, zero if
// |u_k|_1 <= eps_zero M, intermediate otherwise.
std::vector<StepClass> saturation_profile(const ControlTrajectory& ctrl,
                                          double M,
                                          SaturationThresholds thr = {});

struct SparsityReport {
  double T = 0.0;
  double M = 0.0;
  StoppingTime stop;
  std::vector<StepClass> sat_mask;
  std::vector<int> intermediate_steps;
  double frac_saturated_before = 1.0;  // over steps k < idx
  double frac_zero_after = 1.0;        // over steps k >= idx
  double frac_bang_bang = 1.0;         // saturated or zero, over all steps
  double E_at_Tstar = 0.0;
  double E_initial = 0.0;
  double E_final = 0.0;
  // Implied constants of the two estimates for this run alone:
  // T* / (1/M + 1/M^2) and T E(x(T*)) / (1/M + 1).
  double bound_Tstar = 0.0;
  double bound_E = 0.0;
  FunctionalValue value;
};

SparsityReport sparsity_report(const StateTrajectory& traj,
                               const ControlTrajectory& ctrl,
                               const ObjectiveSpec& obj,
                               SaturationThresholds thr = {});

// Slack allowed when comparing discrete functionals of two different time
// discretizations: 5 dt (max E - min E) over the nodes of `traj`.
double quadrature_tolerance(const StateTrajectory& traj,
                            const ObjectiveSpec& obj);

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct Improvement {
  ControlTrajectory ctrl;      // on the refined grid
  int refinement = 1;          // fine steps per original step
  double theta = 0.0;
  double predicted_decrease = 0.0;  // theta^2 (b - a)
  double J_before = 0.0;
  double J_after = 0.0;
  double tolerance = 0.0;      // quadrature_tolerance of the original run
  bool certified() const {
    return J_after <= J_before - predicted_decrease + tolerance;
  }
};

// Single-interval improvement: on (a, b) inside (0, T*), where the control
// uses at most (1 - theta) M and the error exceeds its minimum by at least
// theta, compresses the control in time by the factor 1 - theta (scaling it
// up to the saturation level), shifts the rest of [b, T*) left by
// tau = theta (b - a) and zeros the tail from T* - tau. The new control
// lives on a grid refined by the denominator q of theta = p / q so that
// every affine time map lands on nodes.
//
// Throws InvalidInput naming the violated assumption when (a, b) is not a
// node-aligned subinterval of [0, T*], when |u| exceeds (1 - theta) M on it,
// when E - E(T*) < theta on one of its nodes, or when theta is not in
// [0, 1) with denominator <= max_denominator.
Improvement improve_control(const DynamicsSpec& spec,
                            std::span<const double> x0,
                            const ControlTrajectory& ctrl,
                            const ObjectiveSpec& obj, Scheme scheme,
                            Interval interval, double theta,
                            int max_denominator = 1000);

// Resamples a piecewise-constant control onto a grid with `factor` times as
// many steps; the represented function is unchanged.
ControlTrajectory refine_control(const ControlTrajectory& ctrl, int factor);

// Zeroes every step at or after node `idx`.
ControlTrajectory truncate_after(const ControlTrajectory& ctrl, int idx);

struct RunPoint {
  double T = 0.0;
  double M = 0.0;
  double Tstar = 0.0;
  double E_at_Tstar = 0.0;
};

struct ConstantFit {
  std::vector<double> implied;  // per run
  double C = 0.0;               // max of implied: the tightest run
  double slack = 1.0;           // max / min of implied
  bool covers_all = false;
};

struct BoundFit {
  ConstantFit tstar;  // T* <= C (1/M + 1/M^2)
  ConstantFit error;  // E(x(T*)) <= C / T (1/M + 1)
  bool varies_T = false;
  bool varies_M = false;
  // Trend checks on the sorted axis values (true when the axis does not
  // vary): E(x(T*)) non-increasing in T at fixed M, T* non-increasing in M
  // at fixed T.
  bool error_nonincreasing_in_T = true;
  bool tstar_nonincreasing_in_M = true;
};

// Fits the constants of both estimates over a sweep. Throws InvalidInput
// with fewer than two runs or when neither T nor M takes two distinct
// values.
BoundFit check_theorem_bounds(std::span<const RunPoint> runs,
                              double trend_rel_slack = 0.1,
                              double tstar_abs_slack = 0.0);

struct TurnpikeReport {
  StoppingTime stop;
  double max_state_deviation_after_Tstar = 0.0;  // max_{t >= T*} |x - xbar|_p^p
  double CT_product = 0.0;                       // deviation * T
  double frac_bang_bang = 0.0;
  std::vector<StepClass> sat_mask;
};

// |x - xbar|_p^p
double deviation_pp(std::span<const double> x, std::span<const double> xbar,
                    int p);

// T* is detected on the running cost |x(t) - xbar|_p^p. Throws InvalidInput
// unless the dynamics are driftless and p is 1 or 2.
TurnpikeReport turnpike_check(const DynamicsSpec& spec,
                              std::span<const double> xbar, int p,
                              const StateTrajectory& traj,
                              const ControlTrajectory& ctrl, double M,
                              SaturationThresholds thr = {});

}  // namespace sparsenode

#endif  // SPARSENODE_ANALYSIS_H_
