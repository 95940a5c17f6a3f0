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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sparsenode/adjoint.h"
#include "sparsenode/error.h"

namespace sparsenode {
namespace {

std::vector<double> random_vec(std::mt19937_64& rng, size_t n, double lo = -1,
                               double hi = 1) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double l1(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

// Projection by bisection on the soft-threshold level.
std::vector<double> project_bisection(const std::vector<double>& v, double M) {
  if (l1(v) <= M) return v;
  double lo = 0.0, hi = 0.0;
  for (double x : v) hi = std::max(hi, std::abs(x));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double x : v) s += std::max(std::abs(x) - mid, 0.0);
    (s > M ? lo : hi) = mid;
  }
  std::vector<double> z(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    z[i] = std::copysign(std::max(std::abs(v[i]) - hi, 0.0), v[i]);
  }
  return z;
}

TEST(ProjectL1, Examples) {
  EXPECT_EQ(project_l1(std::vector<double>{2.0, 1.0}, 1.0),
            (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(project_l1(std::vector<double>{3.0, 3.0}, 2.0),
            (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(project_l1(std::vector<double>{-3.0, 3.0}, 2.0),
            (std::vector<double>{-1.0, 1.0}));
}

TEST(ProjectL1, InsideBallUnchanged) {
  const std::vector<double> v{0.2, -0.3, 0.1};
  EXPECT_EQ(project_l1(v, 1.0), v);
  EXPECT_EQ(project_l1(std::vector<double>{}, 1.0), std::vector<double>{});
}

TEST(ProjectL1, MatchesBisectionOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + trial % 9;
    const std::vector<double> v = random_vec(rng, n, -3, 3);
    const double M = 0.1 + 2.0 * (trial % 5);
    const std::vector<double> z = project_l1(v, M);
    const std::vector<double> ref = project_bisection(v, M);
    for (size_t i = 0; i < n; ++i) EXPECT_NEAR(z[i], ref[i], 1e-10);
    EXPECT_LE(l1(z), M * (1 + 1e-12));
  }
}

TEST(ProjectL1, RejectsNonPositiveRadius) {
  EXPECT_THROW(project_l1(std::vector<double>{1.0}, 0.0), InvalidInput);
  EXPECT_THROW(project_l1(std::vector<double>{1.0}, -1.0), InvalidInput);
}

TEST(ProxL1, SoftThreshold) {
  EXPECT_EQ(prox_l1(std::vector<double>{3.0, -0.5, -2.0}, 1.0),
            (std::vector<double>{2.0, 0.0, -1.0}));
  EXPECT_THROW(prox_l1(std::vector<double>{1.0}, -0.1), InvalidInput);
}

TEST(ProxL1, MatchesGridMinimizer) {
  // argmin_z (z - v)^2 / 2 + tau |z| over a grid of spacing 1e-6.
  const double tau = 0.37;
  for (double v : {-1.3, -0.2, 0.0, 0.36, 0.9}) {
    double best = 0.0, best_val = 1e300;
    for (long i = -2000000; i <= 2000000; ++i) {
      const double z = v + i * 1e-6;
      const double val = 0.5 * (z - v) * (z - v) + tau * std::abs(z);
      if (val < best_val) {
        best_val = val;
        best = z;
      }
    }
    EXPECT_NEAR(prox_l1(std::vector<double>{v}, tau)[0], best, 1e-6);
  }
}

TEST(Adam, FirstStepHasLengthLr) {
  AdamParams p;
  p.lr = 0.05;
  std::vector<double> u{1.0, -2.0, 0.5};
  const std::vector<double> g{3.0, -1e-3, 40.0};
  AdamState s(3);
  adam_step(u, g, s, p);
  EXPECT_NEAR(u[0], 1.0 - 0.05, 1e-8);
  EXPECT_NEAR(u[1], -2.0 + 0.05, 1e-6);
  EXPECT_NEAR(u[2], 0.5 - 0.05, 1e-8);
  EXPECT_EQ(s.t, 1);
}

TEST(Adam, ZeroGradientLeavesIterate) {
  AdamParams p;
  std::vector<double> u{1.0, -2.0};
  AdamState s(2);
  adam_step(u, std::vector<double>{0.0, 0.0}, s, p);
  EXPECT_EQ(u, (std::vector<double>{1.0, -2.0}));
}

TEST(Adam, ParameterValidation) {
  AdamParams p;
  p.lr = 0.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = AdamParams{};
  p.beta1 = 1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = AdamParams{};
  p.eps = 0.0;
  EXPECT_THROW(p.validate(), InvalidInput);
}

class TrainTest : public ::testing::Test {
 protected:
  DynamicsSpec spec = DynamicsSpec::Inside(1, 2, Activation::Tanh());
  std::vector<double> x0{0.5, -0.5};
  ObjectiveSpec obj = [] {
    ObjectiveSpec s;
    s.output = OutputMap::Identity(1);
    s.targets = {1.5, -1.0};
    s.M = 2.0;
    s.penalty_weight = 0.1;
    return s;
  }();
  TimeGrid grid{2.0, 10};
};

TEST_F(TrainTest, ZeroIterationsEvaluatesInitialControl) {
  TrainConfig cfg;
  cfg.iters = 0;
  cfg.init = InitKind::kZeros;
  const TrainResult r = train(spec, x0, obj, grid, cfg);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_NEAR(r.history[0].J, 2.0 * error_E(x0, obj), 1e-14);
  EXPECT_EQ(r.ctrl.l1_cost(), 0.0);
}

TEST_F(TrainTest, NoPenaltyLargeBallIsPlainAdam) {
  obj.penalty_weight = 0.0;
  obj.M = 1e9;
  TrainConfig cfg;
  cfg.iters = 50;
  cfg.seed = 11;
  cfg.adam.lr = 0.03;
  for (Scheme scheme : {Scheme::kEuler, Scheme::kMidpoint}) {
    cfg.scheme = scheme;
    const TrainResult r = train(spec, x0, obj, grid, cfg);
    ControlTrajectory u = initial_control(grid, spec.control_dim(), cfg);
    const size_t n = u.values().size();
    std::vector<double> m(n, 0.0), v(n, 0.0);
    for (int t = 1; t <= cfg.iters; ++t) {
      const Gradient g = grad_running(spec, x0, u, obj, scheme);
      for (size_t i = 0; i < n; ++i) {
        m[i] = 0.9 * m[i] + 0.1 * g.values[i];
        v[i] = 0.999 * v[i] + 0.001 * g.values[i] * g.values[i];
        const double mh = m[i] / (1 - std::pow(0.9, t));
        const double vh = v[i] / (1 - std::pow(0.999, t));
        u.values()[i] -= cfg.adam.lr * mh / (std::sqrt(vh) + 1e-8);
      }
    }
    for (size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(r.ctrl.values()[i], u.values()[i], 1e-10);
    }
  }
}

TEST_F(TrainTest, IteratesStayAdmissible) {
  obj.M = 0.5;
  TrainConfig cfg;
  cfg.iters = 200;
  cfg.adam.lr = 0.1;
  cfg.init_scale = 3.0;
  int calls = 0;
  for (ProxScaling prox : {ProxScaling::kPlain, ProxScaling::kPreconditioned}) {
    cfg.prox = prox;
    const TrainResult r = train(spec, x0, obj, grid, cfg,
                                [&](int iter, const ControlTrajectory& c) {
                                  ++calls;
                                  EXPECT_GE(iter, 1);
                                  EXPECT_TRUE(c.admissible(obj.M));
                                });
    EXPECT_TRUE(r.ctrl.admissible(obj.M));
    EXPECT_EQ(r.history.size(), 201u);
  }
  EXPECT_EQ(calls, 400);
}

TEST_F(TrainTest, Deterministic) {
  TrainConfig cfg;
  cfg.iters = 100;
  cfg.seed = 5;
  const TrainResult a = train(spec, x0, obj, grid, cfg);
  const TrainResult b = train(spec, x0, obj, grid, cfg);
  EXPECT_EQ(a.ctrl.values(), b.ctrl.values());
  EXPECT_EQ(a.history.back().J, b.history.back().J);
}

TEST_F(TrainTest, DecreasesFunctional) {
  TrainConfig cfg;
  cfg.iters = 300;
  cfg.adam.lr = 0.02;
  const TrainResult r = train(spec, x0, obj, grid, cfg);
  EXPECT_LT(r.history.back().J, 0.5 * r.history.front().J);
}

TEST(Train, ReachesReachableTarget) {
  // x' = u, 0 -> 1 with |u| <= 2 and no penalty.
  const DynamicsSpec spec =
      DynamicsSpec::Driftless(1, 1, {AffineField{{0.0}, {1.0}}});
  ObjectiveSpec obj;
  obj.output = OutputMap::Identity(1);
  obj.targets = {1.0};
  obj.M = 2.0;
  obj.penalty_weight = 0.0;
  TrainConfig cfg;
  cfg.iters = 2000;
  cfg.adam.lr = 0.05;
  cfg.seed = 1;
  const std::vector<double> x0{0.0};
  const TrainResult r = train(spec, x0, obj, TimeGrid(2.0, 20), cfg);
  const int last = r.traj.nodes() - 1;
  EXPECT_LE(error_E(r.traj.state(last), obj), 1e-4);
}

TEST(Train, ReachesTargetWithLinearField) {
  // x' = w x + b, one sample.
  const DynamicsSpec spec = DynamicsSpec::Inside(1, 1, Activation::Identity());
  ObjectiveSpec obj;
  obj.output = OutputMap::Identity(1);
  obj.targets = {1.0};
  obj.M = 8.0;
  obj.penalty_weight = 0.0;
  TrainConfig cfg;
  cfg.iters = 2000;
  cfg.adam.lr = 0.05;
  cfg.seed = 5;
  const std::vector<double> x0{0.0};
  const TrainResult r = train(spec, x0, obj, TimeGrid(4.0, 80), cfg);
  const int last = r.traj.nodes() - 1;
  EXPECT_LE(error_E(r.traj.state(last), obj), 1e-4);
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.iters = -1;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(TrainConfig, NameRoundTrips) {
  for (InitKind k : {InitKind::kZeros, InitKind::kUniformSmall}) {
    EXPECT_EQ(init_kind_from_string(to_string(k)), k);
  }
  for (ProxScaling p : {ProxScaling::kPlain, ProxScaling::kPreconditioned}) {
    EXPECT_EQ(prox_scaling_from_string(to_string(p)), p);
  }
  EXPECT_THROW(init_kind_from_string("gaussian"), InvalidInput);
}

TEST(InitialControl, UniformScaleAndSeed) {
  TrainConfig cfg;
  cfg.seed = 3;
  const TimeGrid grid(1.0, 4);
  const ControlTrajectory a = initial_control(grid, 16, cfg);
  for (double v : a.values()) EXPECT_LE(std::abs(v), 0.1 / 4 + 1e-15);
  EXPECT_EQ(a.values(), initial_control(grid, 16, cfg).values());
  cfg.seed = 4;
  EXPECT_NE(a.values(), initial_control(grid, 16, cfg).values());
}

}  // namespace
}  // namespace sparsenode
