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


#include "sparsenode/datagen.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sparsenode/error.h"

namespace sparsenode {
namespace {

Dataset binary(std::vector<double> xs, std::vector<int> classes) {
  Dataset ds;
  ds.d = 2;
  ds.m = 2;
  ds.xs = std::move(xs);
  ds.classes = std::move(classes);
  return ds;
}

TEST(TwoGaussians, ShapeAndLabels) {
  const Dataset ds = gen_two_gaussians(40, 4.0, 1);
  EXPECT_EQ(ds.n(), 40);
  EXPECT_EQ(ds.d, 2);
  EXPECT_EQ(ds.m, 2);
  int ones = 0;
  for (int y : ds.classes) ones += y;
  EXPECT_EQ(ones, 20);
  EXPECT_NO_THROW(ds.validate());
}

TEST(TwoGaussians, WideSeparationIsSeparable) {
  EXPECT_TRUE(separability_check(gen_two_gaussians(100, 12.0, 3)));
}

TEST(TwoGaussians, ArgumentChecks) {
  EXPECT_THROW(gen_two_gaussians(3, 1.0, 0), InvalidInput);
  EXPECT_THROW(gen_two_gaussians(4, 0.0, 0), InvalidInput);
}

TEST(Circles, NoiselessRadii) {
  const Dataset ds = gen_circles(50, 1.0, 3.0, 0.0, 2);
  for (int i = 0; i < ds.n(); ++i) {
    const double r = std::hypot(ds.point(i)[0], ds.point(i)[1]);
    EXPECT_NEAR(r, ds.classes[i] == 0 ? 1.0 : 3.0, 1e-12);
  }
}

TEST(Circles, NotLinearlySeparable) {
  const Dataset ds = gen_circles(200, 1.0, 3.0, 0.05, 1);
  EXPECT_NO_THROW(ds.validate());
  EXPECT_FALSE(separability_check(ds, 2000));
}

TEST(Circles, ArgumentChecks) {
  EXPECT_THROW(gen_circles(10, 3.0, 1.0, 0.1, 0), InvalidInput);
  EXPECT_THROW(gen_circles(10, 1.0, 3.0, -0.1, 0), InvalidInput);
  EXPECT_THROW(gen_circles(0, 1.0, 3.0, 0.1, 0), InvalidInput);
}

TEST(Generators, DeterministicPerSeed) {
  EXPECT_EQ(gen_circles(20, 1, 2, 0.1, 9).xs, gen_circles(20, 1, 2, 0.1, 9).xs);
  EXPECT_NE(gen_circles(20, 1, 2, 0.1, 9).xs, gen_circles(20, 1, 2, 0.1, 10).xs);
  EXPECT_EQ(gen_two_gaussians(20, 2, 4).xs, gen_two_gaussians(20, 2, 4).xs);
}

TEST(Separability, Xor) {
  EXPECT_FALSE(separability_check(
      binary({0, 0, 1, 1, 0, 1, 1, 0}, {0, 0, 1, 1}), 1000));
}

TEST(Separability, SimplePair) {
  EXPECT_TRUE(separability_check(binary({-1, 0, 1, 0}, {0, 1})));
}

TEST(Separability, RejectsMulticlass) {
  Dataset ds = binary({0, 0, 1, 1, 2, 2}, {0, 1, 2});
  ds.m = 3;
  EXPECT_THROW(separability_check(ds), InvalidInput);
}

TEST(Augment, AppendsZeroCoordinate) {
  const Dataset ds = augment_zero(binary({1, 2, -3, 4}, {0, 1}));
  EXPECT_EQ(ds.d, 3);
  EXPECT_EQ(ds.xs, (std::vector<double>{1, 2, 0, -3, 4, 0}));
  EXPECT_EQ(ds.classes, (std::vector<int>{0, 1}));
}

TEST(Validate, Rejections) {
  EXPECT_THROW(binary({0, 0, 0, 0}, {0, 1}).validate(), InvalidInput);
  EXPECT_THROW(binary({0, 0, 1, 0}, {0}).validate(), InvalidInput);
  EXPECT_THROW(binary({0, 0, 1, 0}, {0, 2}).validate(), InvalidInput);
  EXPECT_THROW(binary({}, {}).validate(), InvalidInput);
  Dataset reg;
  reg.kind = DatasetKind::kRegression;
  reg.d = 1;
  reg.m = 2;
  reg.xs = {0.0};
  reg.targets = {1.0};
  EXPECT_THROW(reg.validate(), InvalidInput);
}

TEST(DatasetCsv, ClassificationRoundTrip) {
  const Dataset ds = gen_circles(10, 1.0, 2.0, 0.3, 5);
  std::stringstream ss;
  write_csv(ss, ds);
  const Dataset back = read_dataset_csv(ss);
  EXPECT_EQ(back.kind, DatasetKind::kClassification);
  EXPECT_EQ(back.d, 2);
  EXPECT_EQ(back.m, 2);
  EXPECT_EQ(back.xs, ds.xs);
  EXPECT_EQ(back.classes, ds.classes);
}

TEST(DatasetCsv, RegressionRoundTrip) {
  Dataset ds;
  ds.kind = DatasetKind::kRegression;
  ds.d = 1;
  ds.m = 2;
  ds.xs = {0.1, 1.0 / 3.0};
  ds.targets = {1.0, -2.5, 1e-300, 7.0};
  std::stringstream ss;
  write_csv(ss, ds);
  EXPECT_EQ(ss.str().substr(0, 12), "x_0,y_0,y_1\n");
  const Dataset back = read_dataset_csv(ss);
  EXPECT_EQ(back.kind, DatasetKind::kRegression);
  EXPECT_EQ(back.m, 2);
  EXPECT_EQ(back.xs, ds.xs);
  EXPECT_EQ(back.targets, ds.targets);
}

TEST(DatasetCsv, Malformed) {
  std::istringstream empty("");
  EXPECT_THROW(read_dataset_csv(empty), InvalidInput);
  std::istringstream bad_col("x_0,z\n1,2\n");
  EXPECT_THROW(read_dataset_csv(bad_col), InvalidInput);
  std::istringstream ragged("x_0,x_1,y\n1,2\n");
  EXPECT_THROW(read_dataset_csv(ragged), InvalidInput);
  std::istringstream text("x_0,y\nabc,1\n");
  EXPECT_THROW(read_dataset_csv(text), InvalidInput);
}

}  // namespace
}  // namespace sparsenode
