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

#include "sparsenode/adjoint.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sparsenode/error.h"

namespace sparsenode {

double Gradient::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double running_cost(const DynamicsSpec& spec, std::span<const double> x0,
                    const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                    Scheme scheme) {
  const StateTrajectory traj = integrate(spec, x0, ctrl, scheme);
  return functional_J(traj, ctrl, obj).running;
}

Gradient grad_running(const DynamicsSpec& spec, std::span<const double> x0,
                      const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                      Scheme scheme) {
  return grad_running(spec, integrate(spec, x0, ctrl, scheme), ctrl, obj);
}

Gradient grad_running(const DynamicsSpec& spec, const StateTrajectory& traj,
                      const ControlTrajectory& ctrl, const ObjectiveSpec& obj) {
  if (!(traj.grid() == ctrl.grid())) {
    throw InvalidInput("state and control trajectories are on different grids");
  }
  const int n_t = ctrl.steps();
  const int d_u = ctrl.control_dim();
  const size_t dim = static_cast<size_t>(traj.state_dim());
  const double dt = ctrl.grid().dt();
  const std::vector<double> w = quadrature_weights(ctrl.grid(), obj.quadrature);

  Gradient g{n_t, d_u, std::vector<double>(static_cast<size_t>(n_t) * d_u, 0.0)};

  // lambda holds dJ/dx^{k+1} on entry to iteration k.
  std::vector<double> lambda(dim, 0.0);
  if (w[n_t] != 0.0) error_E_grad(traj.state(n_t), obj, w[n_t], lambda);

  std::vector<double> gx(dim);
  std::vector<double> gu(d_u);
  std::vector<double> f(dim);
  std::vector<double> mid(dim);
  std::vector<double> mu(dim);
  for (int k = n_t - 1; k >= 0; --k) {
    std::span<const double> x = traj.state(k);
    std::span<const double> u = ctrl.point(k);
    std::span<double> gk(g.values.data() + static_cast<size_t>(k) * d_u, d_u);
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gu.begin(), gu.end(), 0.0);
    if (traj.scheme() == Scheme::kEuler) {
      // x' = x + dt f(x, u)
      field_vjp(spec, x, u, lambda, gx, gu);
      for (int j = 0; j < d_u; ++j) gk[j] = dt * gu[j];
      for (size_t i = 0; i < dim; ++i) lambda[i] += dt * gx[i];
    } else {
      // y = x + dt/2 f(x, u);  x' = x + dt f(y, u)
      eval_field(spec, x, u, f);
      for (size_t i = 0; i < dim; ++i) mid[i] = x[i] + 0.5 * dt * f[i];
      std::fill(mu.begin(), mu.end(), 0.0);
      field_vjp(spec, mid, u, lambda, mu, gu);
      for (int j = 0; j < d_u; ++j) gk[j] = dt * gu[j];
      // mu = dJ/dy = dt * (df/dy)^T lambda
      for (size_t i = 0; i < dim; ++i) mu[i] *= dt;
      std::fill(gu.begin(), gu.end(), 0.0);
      field_vjp(spec, x, u, mu, gx, gu);
      for (int j = 0; j < d_u; ++j) gk[j] += 0.5 * dt * gu[j];
      for (size_t i = 0; i < dim; ++i) lambda[i] += mu[i] + 0.5 * dt * gx[i];
    }
    if (w[k] != 0.0) error_E_grad(x, obj, w[k], lambda);
    for (double v : lambda) {
      if (!std::isfinite(v)) {
        throw DivergenceError(
            "adjoint became non-finite at step " + std::to_string(k), k);
      }
    }
  }
  return g;
}

Gradient grad_fd(const DynamicsSpec& spec, std::span<const double> x0,
                 const ControlTrajectory& ctrl, const ObjectiveSpec& obj,
                 Scheme scheme, double h) {
  if (!(h > 0.0)) throw InvalidInput("finite-difference step must be > 0");
  Gradient g{ctrl.steps(), ctrl.control_dim(),
             std::vector<double>(ctrl.values().size(), 0.0)};
  ControlTrajectory probe = ctrl;
  for (size_t i = 0; i < probe.values().size(); ++i) {
    const double orig = probe.values()[i];
    probe.values()[i] = orig + h;
    const double up = running_cost(spec, x0, probe, obj, scheme);
    probe.values()[i] = orig - h;
    const double down = running_cost(spec, x0, probe, obj, scheme);
    probe.values()[i] = orig;
    g.values[i] = (up - down) / (2.0 * h);
  }
  return g;
}

std::vector<double> l1_subgradient(std::span<const double> u) {
  std::vector<double> s(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    s[i] = u[i] > 0.0 ? 1.0 : (u[i] < 0.0 ? -1.0 : 0.0);
  }
  return s;
}

void write_gradient_norms_csv(std::ostream& os, const Gradient& g,
                              const TimeGrid& grid) {
  os << "k,t,grad_l2,grad_max\n";
  char buf[128];
  for (int k = 0; k < g.steps; ++k) {
    double l2 = 0.0;
    double mx = 0.0;
    for (double v : g.step(k)) {
      l2 += v * v;
      mx = std::max(mx, std::abs(v));
    }
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", k, grid.node(k),
                  std::sqrt(l2), mx);
    os << buf;
  }
}

}  // namespace sparsenode
