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


#include "sparsenode/integrator.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

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

// x' = x as the inside form with identity activation, w = 1, b = 0.
DynamicsSpec linear_growth() {
  return DynamicsSpec::Inside(1, 1, Activation::Identity());
}

ControlTrajectory constant(const TimeGrid& grid, std::vector<double> u) {
  std::vector<double> values;
  for (int k = 0; k < grid.steps(); ++k) {
    values.insert(values.end(), u.begin(), u.end());
  }
  return ControlTrajectory(grid, static_cast<int>(u.size()), values);
}

double final_state(Scheme scheme, int n_t) {
  const StateTrajectory traj =
      integrate(linear_growth(), std::vector<double>{1.0},
                constant(TimeGrid(1.0, n_t), {1.0, 0.0}), scheme);
  return traj.state(n_t)[0];
}

TEST(TimeGrid, NodesAndStep) {
  const TimeGrid grid(5.0, 15);
  EXPECT_EQ(grid.node(0), 0.0);
  EXPECT_EQ(grid.node(15), 5.0);
  EXPECT_NEAR(grid.dt() * 15, 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(grid.dt(), 1.0 / 3.0);
}

TEST(TimeGrid, RejectsBadArguments) {
  EXPECT_THROW(TimeGrid(0.0, 4), InvalidInput);
  EXPECT_THROW(TimeGrid(-1.0, 4), InvalidInput);
  EXPECT_THROW(TimeGrid(1.0, 0), InvalidInput);
}

TEST(SchemeNames, RoundTrip) {
  EXPECT_EQ(scheme_from_string("euler"), Scheme::kEuler);
  EXPECT_EQ(scheme_from_string(to_string(Scheme::kMidpoint)), Scheme::kMidpoint);
  EXPECT_THROW(scheme_from_string("rk4"), InvalidInput);
}

TEST(ControlTrajectory, NormsAndAdmissibility) {
  const ControlTrajectory ctrl(TimeGrid(2.0, 2), 2, {1.0, -2.0, 0.5, 0.0});
  EXPECT_EQ(ctrl.l1_norm(0), 3.0);
  EXPECT_EQ(ctrl.l1_norm(1), 0.5);
  EXPECT_DOUBLE_EQ(ctrl.l1_cost(), 3.5);
  EXPECT_TRUE(ctrl.admissible(3.0));
  EXPECT_TRUE(ctrl.admissible(3.0 - 0.5e-9));
  EXPECT_FALSE(ctrl.admissible(2.9));
}

TEST(ControlTrajectory, RejectsWrongValueCount) {
  EXPECT_THROW(ControlTrajectory(TimeGrid(1.0, 2), 2, {1.0, 2.0, 3.0}),
               InvalidInput);
}

TEST(Integrate, OneEulerStepOfExponentialGrowth) {
  EXPECT_EQ(final_state(Scheme::kEuler, 1), 2.0);
}

TEST(Integrate, ZeroControlFreezesState) {
  std::mt19937_64 rng(1);
  const DynamicsSpec spec = DynamicsSpec::Inside(2, 3, Activation::Tanh());
  const std::vector<double> x0 = random_vec(rng, 6);
  for (Scheme s : {Scheme::kEuler, Scheme::kMidpoint}) {
    const StateTrajectory traj =
        integrate(spec, x0, ControlTrajectory(TimeGrid(3.0, 10), 6), s);
    ASSERT_EQ(traj.nodes(), 11);
    for (int k = 0; k < traj.nodes(); ++k) {
      for (int j = 0; j < 6; ++j) EXPECT_EQ(traj.state(k)[j], x0[j]);
    }
  }
}

TEST(Integrate, ClosedFormEulerAndMidpoint) {
  const double h = 1.0 / 64;
  const double euler = final_state(Scheme::kEuler, 64);
  const double mid = final_state(Scheme::kMidpoint, 64);
  EXPECT_NEAR(euler, std::pow(1 + h, 64), 1e-13);
  EXPECT_NEAR(mid, std::pow(1 + h + h * h / 2, 64), 1e-13);
  // e - (1 + 1/64)^64 = 2.094e-2 and e - (1 + h + h^2/2)^64 = 1.10e-4.
  EXPECT_NEAR(std::numbers::e - euler, 2.094e-2, 1e-4);
  EXPECT_NEAR(std::numbers::e - mid, 1.10e-4, 1e-6);
}

TEST(Integrate, ConvergenceOrders) {
  auto order = [](Scheme s) {
    const double e1 = std::abs(std::numbers::e - final_state(s, 64));
    const double e2 = std::abs(std::numbers::e - final_state(s, 128));
    return std::log2(e1 / e2);
  };
  EXPECT_GE(order(Scheme::kEuler), 0.95);
  EXPECT_LE(order(Scheme::kEuler), 1.05);
  EXPECT_GE(order(Scheme::kMidpoint), 1.9);
}

TEST(Integrate, DivergenceNamesTheStep) {
  const ControlTrajectory ctrl = constant(TimeGrid(4.0, 4), {1e200, 0.0});
  try {
    integrate(linear_growth(), std::vector<double>{1.0}, ctrl, Scheme::kEuler);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.step(), 1);
  }
}

TEST(Integrate, DimensionMismatch) {
  const DynamicsSpec spec = DynamicsSpec::Inside(2, 1, Activation::Tanh());
  EXPECT_THROW(integrate(spec, std::vector<double>{0.0},
                         ControlTrajectory(TimeGrid(1.0, 2), 6), Scheme::kEuler),
               InvalidInput);
  EXPECT_THROW(integrate(spec, std::vector<double>{0.0, 0.0},
                         ControlTrajectory(TimeGrid(1.0, 2), 5), Scheme::kEuler),
               InvalidInput);
}

TEST(RescaleControl, ConstantControlHalves) {
  const ControlTrajectory ctrl = constant(TimeGrid(1.0, 4), {3.0, -1.0});
  const ControlTrajectory r = rescale_control(ctrl, 2.0);
  EXPECT_EQ(r.grid(), TimeGrid(2.0, 4));
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(r.point(k)[0], 1.5);
    EXPECT_EQ(r.point(k)[1], -0.5);
  }
  EXPECT_DOUBLE_EQ(r.l1_cost(), ctrl.l1_cost());
}

TEST(RescaleControl, SameHorizonIsIdentity) {
  std::mt19937_64 rng(2);
  const ControlTrajectory ctrl(TimeGrid(1.5, 5), 2, random_vec(rng, 10));
  const ControlTrajectory r = rescale_control(ctrl, 1.5);
  EXPECT_EQ(r.values(), ctrl.values());
  EXPECT_EQ(r.grid(), ctrl.grid());
}

TEST(RescaleControl, RejectsNonPositiveHorizon) {
  const ControlTrajectory ctrl(TimeGrid(1.0, 2), 1);
  EXPECT_THROW(rescale_control(ctrl, 0.0), InvalidInput);
}

// dt' u'_k = dt u_k and f is 1-homogeneous in u, so both schemes take the
// same steps on the rescaled problem.
TEST(RescaleControl, NodeStatesInvariantForBothSchemes) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const DynamicsSpec spec =
        trial % 2 ? DynamicsSpec::Inside(2, 2, Activation::Tanh())
                  : DynamicsSpec::Outside(2, 2, Activation::LeakyRelu(0.1));
    const ControlTrajectory ctrl(TimeGrid(1.0, 12), 6, random_vec(rng, 72));
    const std::vector<double> x0 = random_vec(rng, 4);
    const ControlTrajectory r = rescale_control(ctrl, 3.7);
    for (Scheme s : {Scheme::kEuler, Scheme::kMidpoint}) {
      const StateTrajectory a = integrate(spec, x0, ctrl, s);
      const StateTrajectory b = integrate(spec, x0, r, s);
      for (size_t j = 0; j < a.values().size(); ++j) {
        EXPECT_NEAR(a.values()[j], b.values()[j], 1e-13);
      }
    }
  }
}

TEST(ZeroExtend, AppendsZerosAndFreezesState) {
  std::mt19937_64 rng(4);
  const DynamicsSpec spec = DynamicsSpec::Inside(1, 2, Activation::Tanh());
  const ControlTrajectory ctrl(TimeGrid(1.0, 8), 2, random_vec(rng, 16));
  const ControlTrajectory ext = zero_extend(ctrl, 2.0);
  ASSERT_EQ(ext.steps(), 16);
  for (int k = 8; k < 16; ++k) EXPECT_EQ(ext.l1_norm(k), 0.0);
  for (int k = 0; k < 8; ++k) EXPECT_EQ(ext.l1_norm(k), ctrl.l1_norm(k));
  EXPECT_DOUBLE_EQ(ext.l1_cost(), ctrl.l1_cost());
  const std::vector<double> x0{0.3, -0.4};
  const StateTrajectory a = integrate(spec, x0, ctrl, Scheme::kMidpoint);
  const StateTrajectory b = integrate(spec, x0, ext, Scheme::kMidpoint);
  for (int k = 8; k <= 16; ++k) {
    EXPECT_EQ(b.state(k)[0], a.state(8)[0]);
    EXPECT_EQ(b.state(k)[1], a.state(8)[1]);
  }
}

TEST(ZeroExtend, MisalignedHorizonSuggestsGrid) {
  const ControlTrajectory ctrl(TimeGrid(1.0, 4), 1);
  try {
    zero_extend(ctrl, 2.1);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("n_t = 9"), std::string::npos)
        << e.what();
  }
  EXPECT_THROW(zero_extend(ctrl, 0.5), InvalidInput);
}

TEST(Csv, ControlRoundTripIsExact) {
  std::mt19937_64 rng(5);
  const ControlTrajectory ctrl(TimeGrid(5.0, 15), 3, random_vec(rng, 45, -8, 8));
  std::stringstream ss;
  write_csv(ss, ctrl);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "t,u_0,u_1,u_2");
  const ControlTrajectory back = read_control_csv(ss, ctrl.grid());
  EXPECT_EQ(back.values(), ctrl.values());
}

TEST(Csv, StateRoundTripIsExact) {
  std::mt19937_64 rng(6);
  const DynamicsSpec spec = DynamicsSpec::Inside(2, 1, Activation::Tanh());
  const StateTrajectory traj =
      integrate(spec, random_vec(rng, 2),
                ControlTrajectory(TimeGrid(2.0, 7), 6, random_vec(rng, 42)),
                Scheme::kEuler);
  std::stringstream ss;
  write_csv(ss, traj);
  const StateTrajectory back = read_state_csv(ss, Scheme::kEuler);
  EXPECT_EQ(back.grid(), traj.grid());
  EXPECT_EQ(back.values(), traj.values());
}

TEST(Csv, RowCountMismatchRejected) {
  const ControlTrajectory ctrl(TimeGrid(1.0, 3), 1);
  std::stringstream ss;
  write_csv(ss, ctrl);
  EXPECT_THROW(read_control_csv(ss, TimeGrid(1.0, 4)), InvalidInput);
}

}  // namespace
}  // namespace sparsenode
