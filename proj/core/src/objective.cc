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

#include "sparsenode/objective.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sparsenode/error.h"

namespace sparsenode {

std::string to_string(LossKind kind) {
  return kind == LossKind::kLeastSquares ? "least_squares" : "cross_entropy";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "least_squares") return LossKind::kLeastSquares;
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  throw InvalidInput("unknown loss '" + name + "'");
}

std::string to_string(Quadrature rule) {
  return rule == Quadrature::kLeft ? "left" : "trapezoid";
}

Quadrature quadrature_from_string(const std::string& name) {
  if (name == "left") return Quadrature::kLeft;
  if (name == "trapezoid") return Quadrature::kTrapezoid;
  throw InvalidInput("unknown quadrature '" + name + "'");
}

OutputMap OutputMap::Identity(int d) {
  OutputMap out;
  out.m = d;
  out.d = d;
  out.P.assign(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) out.P[static_cast<size_t>(i) * d + i] = 1.0;
  out.q.assign(d, 0.0);
  return out;
}

void OutputMap::apply(std::span<const double> x, std::span<double> z) const {
  for (int r = 0; r < m; ++r) {
    double acc = q[r];
    for (int c = 0; c < d; ++c) acc += P[static_cast<size_t>(r) * d + c] * x[c];
    z[r] = acc;
  }
}

int ObjectiveSpec::samples() const {
  if (loss == LossKind::kCrossEntropy) return static_cast<int>(classes.size());
  return output.m > 0 ? static_cast<int>(targets.size()) / output.m : 0;
}

void ObjectiveSpec::validate() const {
  if (!(M > 0.0)) throw InvalidInput("constraint level M must be > 0");
  if (!(penalty_weight >= 0.0)) {
    throw InvalidInput("penalty_weight must be >= 0");
  }
  if (output.m < 1 || output.d < 1 ||
      output.P.size() != static_cast<size_t>(output.m) * output.d ||
      output.q.size() != static_cast<size_t>(output.m)) {
    throw InvalidInput("output map P must be m x d and q of size m");
  }
  if (loss == LossKind::kCrossEntropy) {
    if (classes.empty()) throw InvalidInput("cross_entropy needs class labels");
    for (int y : classes) {
      if (y < 0 || y >= output.m) {
        throw InvalidInput("class index " + std::to_string(y) +
                           " outside [0, " + std::to_string(output.m) + ")");
      }
    }
  } else {
    if (targets.empty() || targets.size() % output.m != 0) {
      throw InvalidInput("least_squares needs n x m targets");
    }
  }
}

double cross_entropy(std::span<const double> z, int y) {
  if (y < 0 || y >= static_cast<int>(z.size())) {
    throw InvalidInput("class index " + std::to_string(y) + " outside [0, " +
                       std::to_string(z.size()) + ")");
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - zmax);
  return std::log(sum) - (z[y] - zmax);
}

double squared_distance(std::span<const double> z, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    const double e = z[i] - y[i];
    s += e * e;
  }
  return s;
}

double sample_loss(const ObjectiveSpec& spec, std::span<const double> x,
                   int i) {
  const OutputMap& out = spec.output;
  std::vector<double> z(out.m);
  out.apply(x.subspan(static_cast<size_t>(i) * out.d, out.d), z);
  if (spec.loss == LossKind::kCrossEntropy) {
    return cross_entropy(z, spec.classes[i]);
  }
  return squared_distance(
      z, std::span<const double>(spec.targets)
             .subspan(static_cast<size_t>(i) * out.m, out.m));
}

double error_E(std::span<const double> x, const ObjectiveSpec& spec) {
  const int n = spec.samples();
  if (static_cast<size_t>(n) * spec.output.d != x.size()) {
    throw InvalidInput("state size does not match samples x d of the output map");
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_loss(spec, x, i);
  return sum / n;
}

void error_E_grad(std::span<const double> x, const ObjectiveSpec& spec,
                  double scale, std::span<double> grad) {
  const OutputMap& out = spec.output;
  const int n = spec.samples();
  const double w = scale / n;
  std::vector<double> z(out.m);
  std::vector<double> gz(out.m);
  for (int i = 0; i < n; ++i) {
    const size_t off = static_cast<size_t>(i) * out.d;
    out.apply(x.subspan(off, out.d), z);
    if (spec.loss == LossKind::kCrossEntropy) {
      const double zmax = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (int j = 0; j < out.m; ++j) {
        gz[j] = std::exp(z[j] - zmax);
        sum += gz[j];
      }
      for (int j = 0; j < out.m; ++j) gz[j] /= sum;
      gz[spec.classes[i]] -= 1.0;
    } else {
      const double* y = spec.targets.data() + static_cast<size_t>(i) * out.m;
      for (int j = 0; j < out.m; ++j) gz[j] = 2.0 * (z[j] - y[j]);
    }
    for (int r = 0; r < out.m; ++r) {
      const double g = w * gz[r];
      for (int c = 0; c < out.d; ++c) {
        grad[off + c] += g * out.P[static_cast<size_t>(r) * out.d + c];
      }
    }
  }
}

std::vector<double> quadrature_weights(const TimeGrid& grid, Quadrature rule) {
  const double dt = grid.dt();
  std::vector<double> w(grid.steps() + 1, dt);
  if (rule == Quadrature::kLeft) {
    w.back() = 0.0;
  } else {
    w.front() = 0.5 * dt;
    w.back() = 0.5 * dt;
  }
  return w;
}

FunctionalValue functional_J(const StateTrajectory& traj,
                             const ControlTrajectory& ctrl,
                             const ObjectiveSpec& spec) {
  if (!(traj.grid() == ctrl.grid())) {
    throw InvalidInput("state and control trajectories are on different grids");
  }
  const std::vector<double> w = quadrature_weights(traj.grid(), spec.quadrature);
  FunctionalValue v;
  for (int k = 0; k < traj.nodes(); ++k) {
    if (w[k] != 0.0) v.running += w[k] * error_E(traj.state(k), spec);
  }
  v.penalty = spec.penalty_weight * ctrl.l1_cost();
  v.J = v.running + v.penalty;
  return v;
}

std::vector<double> error_profile(const StateTrajectory& traj,
                                  const ObjectiveSpec& spec) {
  std::vector<double> e(traj.nodes());
  for (int k = 0; k < traj.nodes(); ++k) e[k] = error_E(traj.state(k), spec);
  return e;
}

double margin(std::span<const double> x, const OutputMap& output,
              std::span<const int> classes) {
  if (output.m < 2) throw InvalidInput("margin needs at least two classes");
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> z(output.m);
  for (size_t i = 0; i < classes.size(); ++i) {
    output.apply(x.subspan(i * output.d, output.d), z);
    const int y = classes[i];
    double wrong = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < output.m; ++j) {
      if (j != y) wrong = std::max(wrong, z[j]);
    }
    best = std::min(best, z[y] - wrong);
  }
  return best;
}

double h_bound(double gamma, int m, double t) {
  if (!(gamma > 0.0)) throw InvalidInput("h needs a positive margin gamma");
  if (m < 2) throw InvalidInput("h needs m >= 2");
  return std::log1p((m - 1) * std::exp(-gamma * std::exp(t)));
}

double h_inverse(double gamma, int m, double v) {
  if (!(gamma > 0.0)) throw InvalidInput("h needs a positive margin gamma");
  if (m < 2) throw InvalidInput("h needs m >= 2");
  if (!(v > 0.0 && v < std::log(static_cast<double>(m)))) {
    throw InvalidInput("h_inverse argument must lie in (0, log m)");
  }
  return std::log(-std::log(std::expm1(v) / (m - 1)) / gamma);
}

}  // namespace sparsenode
