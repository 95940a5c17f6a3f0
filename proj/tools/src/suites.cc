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


#include "sparsenode_tools/suites.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>

#include "sparsenode/adjoint.h"
#include "sparsenode/analysis.h"
#include "sparsenode/dynamics.h"
#include "sparsenode/error.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"
#include "sparsenode/optimizer.h"

namespace sparsenode::tools {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<double> uniform_vec(Rng& rng, size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(rng, lo, hi);
  return v;
}

std::string format(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

DynamicsSpec random_neural(Rng& rng, int which) {
  const int d = uniform_int(rng, 1, 3);
  const int n = uniform_int(rng, 1, 3);
  switch (which % 3) {
    case 0:
      return DynamicsSpec::Inside(d, n, Activation::Tanh());
    case 1:
      return DynamicsSpec::Outside(d, n, Activation::Relu());
    default:
      return DynamicsSpec::Outside(d, n, Activation::LeakyRelu(0.1));
  }
}

DynamicsSpec random_driftless(Rng& rng) {
  const int d = uniform_int(rng, 1, 3);
  const int n = uniform_int(rng, 1, 2);
  const int dim = d * n;
  std::vector<AffineField> fields(uniform_int(rng, 1, 3));
  for (AffineField& f : fields) {
    f.A = uniform_vec(rng, dim * dim, -1.0, 1.0);
    f.c = uniform_vec(rng, dim, -1.0, 1.0);
  }
  return DynamicsSpec::Driftless(d, n, std::move(fields));
}

}  // namespace

SuiteResult suite_scaling(uint64_t seed, int instances) {
  Rng rng(seed);
  SuiteResult r{"scaling", true, 0, 0.0, 1e-12, ""};
  double worst_cost = 0.0;
  double worst_state = 0.0;
  for (int i = 0; i < instances; ++i) {
    // Alternate inside and outside forms.
    const DynamicsSpec spec = random_neural(rng, i % 2 == 0 ? 0 : 2);
    const int n_t = uniform_int(rng, 1, 20);
    const double T0 = uniform(rng, 0.5, 2.0);
    const double T = uniform(rng, 0.25, 4.0);
    const ControlTrajectory ctrl(
        TimeGrid(T0, n_t), spec.control_dim(),
        uniform_vec(rng, static_cast<size_t>(n_t) * spec.control_dim(), -1, 1));
    const std::vector<double> x0 = uniform_vec(rng, spec.state_dim(), -1, 1);
    const ControlTrajectory scaled = rescale_control(ctrl, T);
    worst_cost =
        std::max(worst_cost, std::abs(scaled.l1_cost() - ctrl.l1_cost()));
    const StateTrajectory a = integrate(spec, x0, ctrl, Scheme::kEuler);
    const StateTrajectory b = integrate(spec, x0, scaled, Scheme::kEuler);
    for (size_t j = 0; j < a.values().size(); ++j) {
      worst_state = std::max(worst_state,
                             std::abs(a.values()[j] - b.values()[j]));
    }
    ++r.instances;
  }
  r.worst = std::max(worst_cost, worst_state);
  r.passed = worst_cost <= r.tolerance && worst_state <= r.tolerance;
  r.detail = format("cost drift %.3g, euler node state drift %.3g",
                    worst_cost, worst_state);
  return r;
}

SuiteResult suite_homogeneity(uint64_t seed, int samples) {
  Rng rng(seed);
  SuiteResult r{"homogeneity", true, 0, 0.0, 1e-10, ""};
  for (int i = 0; i < samples; ++i) {
    const DynamicsSpec spec =
        i % 4 == 3 ? random_driftless(rng) : random_neural(rng, i % 4);
    const std::vector<double> x = uniform_vec(rng, spec.state_dim(), -2, 2);
    const std::vector<double> u = uniform_vec(rng, spec.control_dim(), -1, 1);
    const double alpha = uniform(rng, 1e-3, 10.0);
    std::vector<double> au(u);
    for (double& v : au) v *= alpha;
    const std::vector<double> lhs = eval_field(spec, x, au);
    const std::vector<double> rhs = eval_field(spec, x, u);
    for (size_t j = 0; j < lhs.size(); ++j) {
      r.worst = std::max(r.worst, std::abs(lhs[j] - alpha * rhs[j]));
    }
    ++r.instances;
  }
  r.passed = r.worst <= r.tolerance;
  r.detail = format("max |f(x, a u) - a f(x, u)| = %.3g", r.worst);
  return r;
}

namespace {

ObjectiveSpec random_objective(Rng& rng, LossKind loss, int d, int n) {
  ObjectiveSpec obj;
  obj.loss = loss;
  obj.M = 10.0;
  if (loss == LossKind::kLeastSquares) {
    obj.output = OutputMap::Identity(d);
    obj.targets = uniform_vec(rng, static_cast<size_t>(n) * d, -1, 1);
  } else {
    obj.output.m = 2;
    obj.output.d = d;
    obj.output.P = uniform_vec(rng, 2 * d, -1, 1);
    obj.output.q = uniform_vec(rng, 2, -0.5, 0.5);
    for (int i = 0; i < n; ++i) obj.classes.push_back(uniform_int(rng, 0, 1));
  }
  return obj;
}

// Distance of every pre-activation met by the scheme (nodes and midpoint
// stages) from the activation kink.
double kink_distance(const DynamicsSpec& spec, const StateTrajectory& traj,
                     const ControlTrajectory& ctrl) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> mid(spec.state_dim());
  for (int k = 0; k < ctrl.steps(); ++k) {
    best = std::min(best, min_kink_distance(spec, traj.state(k), ctrl.point(k)));
    if (traj.scheme() == Scheme::kMidpoint) {
      step(spec, Scheme::kEuler, 0.5 * ctrl.grid().dt(), traj.state(k),
           ctrl.point(k), mid);
      best = std::min(best, min_kink_distance(spec, mid, ctrl.point(k)));
    }
  }
  return best;
}

}  // namespace

SuiteResult suite_gradient(uint64_t seed, int repeats) {
  Rng rng(seed);
  SuiteResult r{"gradient", true, 0, 0.0, 1e-5, ""};
  constexpr double kH = 1e-5;
  constexpr double kAbsFloor = 1e-8;
  int filtered = 0;
  for (Scheme scheme : {Scheme::kEuler, Scheme::kMidpoint}) {
    for (int form = 0; form < 2; ++form) {
      for (LossKind loss : {LossKind::kLeastSquares, LossKind::kCrossEntropy}) {
        for (int rep = 0; rep < repeats;) {
          const int d = uniform_int(rng, 1, 3);
          const int n = uniform_int(rng, 1, 3);
          const DynamicsSpec spec =
              form == 0 ? DynamicsSpec::Inside(d, n, Activation::Tanh())
                        : DynamicsSpec::Outside(d, n, Activation::LeakyRelu(0.1));
          const int n_t = uniform_int(rng, 2, 6);
          ControlTrajectory ctrl(
              TimeGrid(uniform(rng, 0.5, 1.5), n_t), spec.control_dim(),
              uniform_vec(rng, static_cast<size_t>(n_t) * spec.control_dim(),
                          -0.8, 0.8));
          const std::vector<double> x0 = uniform_vec(rng, spec.state_dim(), -1, 1);
          const ObjectiveSpec obj = random_objective(rng, loss, d, n);
          const StateTrajectory traj = integrate(spec, x0, ctrl, scheme);
          if (kink_distance(spec, traj, ctrl) < 1e-4) {
            ++filtered;
            continue;
          }
          const Gradient g = grad_running(spec, x0, ctrl, obj, scheme);
          std::vector<double>& u = ctrl.values();
          for (size_t j = 0; j < u.size(); ++j) {
            const double keep = u[j];
            u[j] = keep + kH;
            const double up = running_cost(spec, x0, ctrl, obj, scheme);
            u[j] = keep - kH;
            const double down = running_cost(spec, x0, ctrl, obj, scheme);
            u[j] = keep;
            const double fd = (up - down) / (2.0 * kH);
            const double diff = std::abs(g.values[j] - fd);
            const double err =
                std::abs(fd) < kAbsFloor ? diff : diff / std::abs(fd);
            r.worst = std::max(r.worst, err);
          }
          ++r.instances;
          ++rep;
        }
      }
    }
  }
  r.passed = r.worst <= r.tolerance && r.instances >= 20;
  r.detail = format("max relative error %.3g over instances; %g filtered "
                    "near a kink",
                    r.worst, filtered);
  return r;
}

std::vector<double> project_l1_oracle(std::span<const double> v, double M) {
  double norm = 0.0;
  for (double x : v) norm += std::abs(x);
  if (norm <= M) return {v.begin(), v.end()};
  const size_t n = v.size();
  std::vector<double> best;
  double best_violation = std::numeric_limits<double>::infinity();
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) {
        sum += std::abs(v[i]);
        ++count;
      }
    }
    const double theta = (sum - M) / count;
    // KKT: |v_i| > theta on the support, |v_i| <= theta off it.
    double violation = std::max(0.0, -theta);
    for (size_t i = 0; i < n; ++i) {
      const double a = std::abs(v[i]);
      violation = std::max(violation, (mask >> i & 1) ? theta - a : a - theta);
    }
    if (violation < best_violation) {
      best_violation = violation;
      best.assign(n, 0.0);
      for (size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          best[i] = std::copysign(std::abs(v[i]) - theta, v[i]);
        }
      }
    }
  }
  return best;
}

SuiteResult suite_projection(uint64_t seed, int vectors) {
  Rng rng(seed);
  SuiteResult r{"projection", true, 0, 0.0, 1e-8, ""};
  double idem = 0.0;
  double expansion = -std::numeric_limits<double>::infinity();
  std::vector<double> prev_v;
  std::vector<double> prev_p;
  double prev_M = 0.0;
  for (int i = 0; i < vectors; ++i) {
    const int n = uniform_int(rng, 1, 6);
    const double scale = uniform(rng, 0.1, 5.0);
    const std::vector<double> v = uniform_vec(rng, n, -scale, scale);
    const double M = uniform(rng, 0.05, 4.0);
    const std::vector<double> p = project_l1(v, M);
    const std::vector<double> o = project_l1_oracle(v, M);
    for (int j = 0; j < n; ++j) r.worst = std::max(r.worst, std::abs(p[j] - o[j]));
    const std::vector<double> pp = project_l1(p, M);
    for (int j = 0; j < n; ++j) idem = std::max(idem, std::abs(pp[j] - p[j]));
    // Non-expansiveness against the previous vector when shapes agree.
    if (prev_v.size() == v.size() && prev_M == M) {
      double dv = 0.0, dp = 0.0;
      for (int j = 0; j < n; ++j) {
        dv += (v[j] - prev_v[j]) * (v[j] - prev_v[j]);
        dp += (p[j] - prev_p[j]) * (p[j] - prev_p[j]);
      }
      expansion = std::max(expansion, std::sqrt(dp) - std::sqrt(dv));
    }
    // Pair every vector with a perturbed copy on the same ball.
    std::vector<double> w = v;
    for (double& x : w) x += uniform(rng, -0.5, 0.5);
    const std::vector<double> pw = project_l1(w, M);
    double dv = 0.0, dp = 0.0;
    for (int j = 0; j < n; ++j) {
      dv += (v[j] - w[j]) * (v[j] - w[j]);
      dp += (p[j] - pw[j]) * (p[j] - pw[j]);
    }
    expansion = std::max(expansion, std::sqrt(dp) - std::sqrt(dv));
    prev_v = v;
    prev_p = p;
    prev_M = M;
    ++r.instances;
  }
  r.passed = r.worst <= r.tolerance && idem <= 1e-12 && expansion <= 1e-12;
  r.detail = format("oracle gap %.3g, idempotence gap %.3g", r.worst, idem) +
             format(", worst |Pa-Pb| - |a-b| = %.3g", expansion);
  return r;
}

namespace {

struct ImprovementCase {
  DynamicsSpec spec;
  std::vector<double> x0;
  ObjectiveSpec obj;
  ControlTrajectory ctrl;
  Scheme scheme;
  Interval interval;
  double theta;
};

// Constant controls that steer towards the target without reaching it:
// the error stays well above its minimum early on.
std::vector<ImprovementCase> improvement_cases() {
  std::vector<ImprovementCase> cases;
  const TimeGrid grid(2.0, 20);
  const DynamicsSpec line = DynamicsSpec::Driftless(1, 1, {{{0.0}, {1.0}}});
  ObjectiveSpec ls;
  ls.loss = LossKind::kLeastSquares;
  ls.output = OutputMap::Identity(1);
  ls.targets = {1.0};
  ls.M = 2.0;
  // The first case is the reference instance: theta = 1/2, b - a = 0.4.
  cases.push_back({line, {0.0}, ls, ControlTrajectory(grid, 1, std::vector<double>(20, 0.4)),
                   Scheme::kEuler, {0.2, 0.6}, 0.5});
  for (double v : {0.3, 0.4, 0.5}) {
    for (double theta : {0.25, 1.0 / 3.0, 0.5}) {
      for (Interval iv : {Interval{0.0, 0.2}, Interval{0.1, 0.5}}) {
        for (Scheme s : {Scheme::kEuler, Scheme::kMidpoint}) {
          cases.push_back({line, {0.0}, ls,
                           ControlTrajectory(grid, 1, std::vector<double>(20, v)),
                           s, iv, theta});
        }
      }
    }
  }
  // Inside-sigma field with two samples.
  const DynamicsSpec inside = DynamicsSpec::Inside(1, 2, Activation::Tanh());
  ObjectiveSpec ls2 = ls;
  ls2.targets = {2.0, 1.5};
  ls2.M = 1.5;
  std::vector<double> u;
  for (int k = 0; k < 20; ++k) {
    u.push_back(0.2);
    u.push_back(0.3);
  }
  for (double theta : {0.25, 0.4}) {
    for (Scheme s : {Scheme::kEuler, Scheme::kMidpoint}) {
      cases.push_back({inside, {0.0, 0.2}, ls2, ControlTrajectory(grid, 2, u), s,
                       {0.2, 0.8}, theta});
    }
  }
  return cases;
}

}  // namespace

SuiteResult suite_improvement(uint64_t /*seed*/) {
  SuiteResult r{"improvement", true, 0, 0.0, 0.0, ""};
  int rejected = 0;
  bool reference_ok = false;
  bool first = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (const ImprovementCase& c : improvement_cases()) {
    const bool is_reference = first;
    first = false;
    std::optional<Improvement> imp;
    try {
      imp.emplace(improve_control(c.spec, c.x0, c.ctrl, c.obj, c.scheme,
                                  c.interval, c.theta));
    } catch (const InvalidInput&) {
      ++rejected;
      continue;
    }
    // Recompute both functionals and the slack independently of the result.
    const StateTrajectory before = integrate(c.spec, c.x0, c.ctrl, c.scheme);
    const StateTrajectory after = integrate(c.spec, c.x0, imp->ctrl, c.scheme);
    const double J0 = functional_J(before, c.ctrl, c.obj).J;
    const double J1 = functional_J(after, imp->ctrl, c.obj).J;
    const std::vector<double> e = error_profile(before, c.obj);
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    const double tol = 5.0 * c.ctrl.grid().dt() * (*hi - *lo);
    const double predicted =
        c.theta * c.theta * (c.interval.b - c.interval.a);
    const double margin = (J0 - predicted + tol) - J1;
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) r.passed = false;
    if (is_reference) reference_ok = J0 - J1 >= 0.1 - tol;
    ++r.instances;
  }
  r.passed = r.passed && r.instances >= 10 && reference_ok;
  r.worst = -worst_margin;
  r.detail = format("%g rejected by the preconditions", rejected) +
             format("; smallest certificate margin %.3g", worst_margin) +
             "; reference case " + (reference_ok ? "ok" : "FAILED");
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "scaling", "homogeneity", "gradient", "projection", "improvement"};
  return names;
}

SuiteResult run_suite(const std::string& name, uint64_t seed) {
  if (name == "scaling") return suite_scaling(seed);
  if (name == "homogeneity") return suite_homogeneity(seed);
  if (name == "gradient") return suite_gradient(seed);
  if (name == "projection") return suite_projection(seed);
  if (name == "improvement") return suite_improvement(seed);
  throw InvalidInput("unknown suite '" + name +
                     "' (scaling, gradient, projection, improvement, "
                     "homogeneity)");
}

}  // namespace sparsenode::tools
