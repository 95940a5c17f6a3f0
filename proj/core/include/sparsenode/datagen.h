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

#ifndef SPARSENODE_DATAGEN_H_
#define SPARSENODE_DATAGEN_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sparsenode {

enum class DatasetKind { kClassification, kRegression };

// n points in R^d with either class indices in [0, m) or targets in R^m.
struct Dataset {
  DatasetKind kind = DatasetKind::kClassification;
  int d = 0;
  int m = 0;
  std::vector<double> xs;       // n x d row-major
  std::vector<int> classes;     // classification
  std::vector<double> targets;  // regression, n x m row-major

  int n() const { return d > 0 ? static_cast<int>(xs.size()) / d : 0; }
  std::span<const double> point(int i) const {
    return {xs.data() + static_cast<size_t>(i) * d, static_cast<size_t>(d)};
  }
  // Throws InvalidInput if n < 1, labels are inconsistent, or two points
  // coincide.
  void validate() const;
};

// Two unit-variance blobs centred at (+-separation/2, 0), n/2 points each;
// class 0 on the left. Throws InvalidInput if n is odd or < 2 or
// separation <= 0.
Dataset gen_two_gaussians(int n, double separation, uint64_t seed);

// n/2 points on a circle of radius r_in (class 0) and n/2 on a ring of
// radius r_out (class 1), radial Gaussian noise of std `noise`, uniform
// angles.
Dataset gen_circles(int n, double r_in, double r_out, double noise,
                    uint64_t seed);

// Appends a trailing zero coordinate to every point.
Dataset augment_zero(const Dataset& ds);

// Perceptron with bias on a binary dataset (class 0 -> -1, class 1 -> +1).
// True when a separating hyperplane is found within `max_epochs` passes.
// False means "probably not separable". Throws InvalidInput for more than
// two classes.
bool separability_check(const Dataset& ds, int max_epochs = 10000);

// CSV with header x_0..x_{d-1},y (classification) or x_*,y_* (regression).
void write_csv(std::ostream& os, const Dataset& ds);
Dataset read_dataset_csv(std::istream& is);

}  // namespace sparsenode

#endif  // SPARSENODE_DATAGEN_H_
