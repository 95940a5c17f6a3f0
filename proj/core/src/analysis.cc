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

#include "sparsenode/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "sparsenode/error.h"

namespace sparsenode {
namespace {

// Index of t on the grid, or -1 when t is not a node.
int node_index(const TimeGrid& grid, double t) {
  const double r = t / grid.dt();
  const double whole = std::round(r);
  if (std::abs(r - whole) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
  return static_cast<int>(whole);
}

ConstantFit fit_constant(std::vector<double> implied) {
  ConstantFit fit;
  fit.implied = std::move(implied);
  const auto [lo, hi] =
      std::minmax_element(fit.implied.begin(), fit.implied.end());
  fit.C = *hi;
  if (*hi == 0.0) {
    fit.slack = 1.0;
  } else if (*lo <= 0.0) {
    fit.slack = std::numeric_limits<double>::infinity();
  } else {
    fit.slack = *hi / *lo;
  }
  fit.covers_all = std::all_of(fit.implied.begin(), fit.implied.end(),
                               [&](double c) { return c <= fit.C; });
  return fit;
}

}  // namespace

StoppingTime detect_Tstar(std::span<const double> errors,
                          const TimeGrid& grid) {
  if (static_cast<int>(errors.size()) != grid.steps() + 1) {
    throw InvalidInput("error profile must have one value per node");
  }
  StoppingTime s;
  s.idx = static_cast<int>(
      std::min_element(errors.begin(), errors.end()) - errors.begin());
  s.Tstar = grid.node(s.idx);
  s.at_boundary = s.idx == 0;
  return s;
}

StoppingTime detect_Tstar(const StateTrajectory& traj,
                          const ObjectiveSpec& obj) {
  const std::vector<double> e = error_profile(traj, obj);
  return detect_Tstar(e, traj.grid());
}

std::string to_string(StepClass c) {
  switch (c) {
    case StepClass::kSaturated:
      return "saturated";
    case StepClass::kZero:
      return "zero";
    case StepClass::kIntermediate:
      return "intermediate";
  }
  return "unknown";
}

std::vector<StepClass> saturation_profile(const ControlTrajectory& ctrl,
                                          double M, SaturationThresholds thr) {
  if (!(thr.eps_sat > 0.0) || !(thr.eps_zero > 0.0)) {
    throw InvalidInput("saturation thresholds must be > 0");
  }
  std::vector<StepClass> mask(ctrl.steps());
  for (int k = 0; k < ctrl.steps(); ++k) {
    const double norm = ctrl.l1_norm(k);
    if (norm >= (1.0 - thr.eps_sat) * M) {
      mask[k] = StepClass::kSaturated;
    } else if (norm <= thr.eps_zero * M) {
      mask[k] = StepClass::kZero;
    } else {
      mask[k] = StepClass::kIntermediate;
    }
  }
  return mask;
}

SparsityReport sparsity_report(const StateTrajectory& traj,
                               const ControlTrajectory& ctrl,
                               const ObjectiveSpec& obj,
                               SaturationThresholds thr) {
  SparsityReport r;
  r.T = traj.grid().T();
  r.M = obj.M;
  const std::vector<double> e = error_profile(traj, obj);
  r.stop = detect_Tstar(e, traj.grid());
  r.sat_mask = saturation_profile(ctrl, obj.M, thr);
  int sat_before = 0;
  int zero_after = 0;
  int bang = 0;
  for (int k = 0; k < ctrl.steps(); ++k) {
    const StepClass c = r.sat_mask[k];
    if (c == StepClass::kIntermediate) r.intermediate_steps.push_back(k);
    else ++bang;
    if (k < r.stop.idx && c == StepClass::kSaturated) ++sat_before;
    if (k >= r.stop.idx && c == StepClass::kZero) ++zero_after;
  }
  const int before = r.stop.idx;
  const int after = ctrl.steps() - r.stop.idx;
  r.frac_saturated_before = before > 0 ? double(sat_before) / before : 1.0;
  r.frac_zero_after = after > 0 ? double(zero_after) / after : 1.0;
  r.frac_bang_bang = double(bang) / ctrl.steps();
  r.E_at_Tstar = e[r.stop.idx];
  r.E_initial = e.front();
  r.E_final = e.back();
  const double M = obj.M;
  r.bound_Tstar = r.stop.Tstar / (1.0 / M + 1.0 / (M * M));
  r.bound_E = r.E_at_Tstar * r.T / (1.0 / M + 1.0);
  r.value = functional_J(traj, ctrl, obj);
  return r;
}

double quadrature_tolerance(const StateTrajectory& traj,
                            const ObjectiveSpec& obj) {
  const std::vector<double> e = error_profile(traj, obj);
  const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
  return 5.0 * traj.grid().dt() * (*hi - *lo);
}

ControlTrajectory refine_control(const ControlTrajectory& ctrl, int factor) {
  if (factor < 1) throw InvalidInput("refinement factor must be >= 1");
  const int d_u = ctrl.control_dim();
  ControlTrajectory fine(TimeGrid(ctrl.grid().T(), ctrl.steps() * factor), d_u);
  for (int k = 0; k < ctrl.steps(); ++k) {
    for (int s = 0; s < factor; ++s) {
      std::copy(ctrl.point(k).begin(), ctrl.point(k).end(),
                fine.point(k * factor + s).begin());
    }
  }
  return fine;
}

ControlTrajectory truncate_after(const ControlTrajectory& ctrl, int idx) {
  ControlTrajectory out = ctrl;
  for (int k = std::max(idx, 0); k < out.steps(); ++k) {
    std::fill(out.point(k).begin(), out.point(k).end(), 0.0);
  }
  return out;
}

Improvement improve_control(const DynamicsSpec& spec,
                            std::span<const double> x0,
                            const ControlTrajectory& ctrl,
                            const ObjectiveSpec& obj, Scheme scheme,
                            Interval interval, double theta,
                            int max_denominator) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw InvalidInput("theta must lie in [0, 1)");
  }
  int p = -1;
  int q = 1;
  for (int den = 1; den <= max_denominator; ++den) {
    const double num = std::round(theta * den);
    if (std::abs(theta - num / den) <= 1e-12) {
      p = static_cast<int>(num);
      q = den;
      break;
    }
  }
  if (p < 0) {
    throw InvalidInput("theta must be rational with denominator <= " +
                       std::to_string(max_denominator));
  }

  const TimeGrid& grid = ctrl.grid();
  const int ia = node_index(grid, interval.a);
  const int ib = node_index(grid, interval.b);
  if (ia < 0 || ib < 0) {
    throw InvalidInput("interval endpoints must be grid nodes");
  }

  const StateTrajectory traj = integrate(spec, x0, ctrl, scheme);
  const std::vector<double> e = error_profile(traj, obj);
  const StoppingTime stop = detect_Tstar(e, grid);
  if (stop.idx == 0) {
    throw InvalidInput("T* = 0: there is no interval inside (0, T*)");
  }
  if (!(0 <= ia && ia < ib && ib <= stop.idx)) {
    throw InvalidInput("interval must be a nonempty subinterval of (0, T*)");
  }
  const double cap = (1.0 - theta) * obj.M;
  for (int k = ia; k < ib; ++k) {
    if (ctrl.l1_norm(k) > cap + 1e-12 * obj.M) {
      throw InvalidInput(
          "assumption |u(t)|_1 <= (1 - theta) M violated at step " +
          std::to_string(k));
    }
  }
  for (int k = ia; k <= ib; ++k) {
    if (e[k] - e[stop.idx] < theta - 1e-12) {
      throw InvalidInput(
          "assumption E(x(t)) - E(x(T*)) >= theta violated at node " +
          std::to_string(k));
    }
  }

  const int d_u = ctrl.control_dim();
  ControlTrajectory fine(TimeGrid(grid.T(), grid.steps() * q), d_u);
  int j = 0;
  auto emit = [&](std::span<const double> u, double scale, int count) {
    for (int s = 0; s < count; ++s, ++j) {
      std::span<double> dst = fine.point(j);
      for (int c = 0; c < d_u; ++c) dst[c] = scale * u[c];
    }
  };
  for (int k = 0; k < ia; ++k) emit(ctrl.point(k), 1.0, q);
  const double stretch = static_cast<double>(q) / (q - p);
  for (int k = ia; k < ib; ++k) emit(ctrl.point(k), stretch, q - p);
  for (int k = ib; k < stop.idx; ++k) emit(ctrl.point(k), 1.0, q);
  // Remaining fine steps are already zero.

  Improvement imp{std::move(fine), q, theta, 0.0, 0.0, 0.0, 0.0};
  imp.predicted_decrease = theta * theta * (interval.b - interval.a);
  imp.J_before = functional_J(traj, ctrl, obj).J;
  const StateTrajectory fine_traj = integrate(spec, x0, imp.ctrl, scheme);
  imp.J_after = functional_J(fine_traj, imp.ctrl, obj).J;
  imp.tolerance = quadrature_tolerance(traj, obj);
  return imp;
}

BoundFit check_theorem_bounds(std::span<const RunPoint> runs,
                              double trend_rel_slack, double tstar_abs_slack) {
  if (runs.size() < 2) {
    throw InvalidInput("bound fitting needs at least two runs");
  }
  BoundFit fit;
  std::map<double, std::vector<RunPoint>> by_M;
  std::map<double, std::vector<RunPoint>> by_T;
  for (const RunPoint& r : runs) {
    by_M[r.M].push_back(r);
    by_T[r.T].push_back(r);
  }
  auto distinct = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::unique(v.begin(), v.end()) - v.begin();
  };
  for (auto& [M, group] : by_M) {
    std::vector<double> Ts;
    for (const auto& r : group) Ts.push_back(r.T);
    if (distinct(Ts) < 2) continue;
    fit.varies_T = true;
    std::sort(group.begin(), group.end(),
              [](const RunPoint& x, const RunPoint& y) { return x.T < y.T; });
    for (size_t i = 1; i < group.size(); ++i) {
      if (group[i].E_at_Tstar >
          group[i - 1].E_at_Tstar * (1.0 + trend_rel_slack)) {
        fit.error_nonincreasing_in_T = false;
      }
    }
  }
  for (auto& [T, group] : by_T) {
    std::vector<double> Ms;
    for (const auto& r : group) Ms.push_back(r.M);
    if (distinct(Ms) < 2) continue;
    fit.varies_M = true;
    std::sort(group.begin(), group.end(),
              [](const RunPoint& x, const RunPoint& y) { return x.M < y.M; });
    for (size_t i = 1; i < group.size(); ++i) {
      if (group[i].Tstar > group[i - 1].Tstar + tstar_abs_slack) {
        fit.tstar_nonincreasing_in_M = false;
      }
    }
  }
  if (!fit.varies_T && !fit.varies_M) {
    throw InvalidInput(
        "bound fitting needs two distinct T at fixed M or two distinct M at "
        "fixed T");
  }
  std::vector<double> ct;
  std::vector<double> ce;
  for (const RunPoint& r : runs) {
    ct.push_back(r.Tstar / (1.0 / r.M + 1.0 / (r.M * r.M)));
    ce.push_back(r.E_at_Tstar * r.T / (1.0 / r.M + 1.0));
  }
  fit.tstar = fit_constant(std::move(ct));
  fit.error = fit_constant(std::move(ce));
  return fit;
}

double deviation_pp(std::span<const double> x, std::span<const double> xbar,
                    int p) {
  if (x.size() != xbar.size()) {
    throw InvalidInput("target state has the wrong dimension");
  }
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double e = std::abs(x[i] - xbar[i]);
    s += p == 1 ? e : e * e;
  }
  return s;
}

TurnpikeReport turnpike_check(const DynamicsSpec& spec,
                              std::span<const double> xbar, int p,
                              const StateTrajectory& traj,
                              const ControlTrajectory& ctrl, double M,
                              SaturationThresholds thr) {
  if (spec.form() != DynamicsForm::kDriftlessAffine) {
    throw InvalidInput("turnpike check applies to driftless systems only");
  }
  if (p != 1 && p != 2) throw InvalidInput("turnpike check supports p = 1, 2");
  TurnpikeReport r;
  std::vector<double> dev(traj.nodes());
  for (int k = 0; k < traj.nodes(); ++k) {
    dev[k] = deviation_pp(traj.state(k), xbar, p);
  }
  r.stop = detect_Tstar(dev, traj.grid());
  for (int k = r.stop.idx; k < traj.nodes(); ++k) {
    r.max_state_deviation_after_Tstar =
        std::max(r.max_state_deviation_after_Tstar, dev[k]);
  }
  r.CT_product = r.max_state_deviation_after_Tstar * traj.grid().T();
  r.sat_mask = saturation_profile(ctrl, M, thr);
  const auto bang = std::count_if(r.sat_mask.begin(), r.sat_mask.end(),
                                  [](StepClass c) {
                                    return c != StepClass::kIntermediate;
                                  });
  r.frac_bang_bang = double(bang) / ctrl.steps();
  return r;
}

}  // namespace sparsenode
