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


#ifndef SPARSENODE_TOOLS_SUITES_H_
#define SPARSENODE_TOOLS_SUITES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sparsenode::tools {

struct SuiteResult {
  std::string name;
  bool passed = false;
  int instances = 0;
  double worst = 0.0;      // the suite's headline error measure
  double tolerance = 0.0;
  std::string detail;
};

// Randomized property suites with a fixed master seed.
//   scaling      rescale_control: cost exact, euler node states to 1e-12
//   homogeneity  |f(x, a u) - a f(x, u)| <= 1e-10
//   gradient     adjoint vs central differences, max rel err <= 1e-5
//   projection   l1-ball projection vs support-enumeration KKT oracle
//   improvement  interval improvement certificate on constructed controls
SuiteResult suite_scaling(uint64_t seed, int instances = 100);
SuiteResult suite_homogeneity(uint64_t seed, int samples = 1000);
SuiteResult suite_gradient(uint64_t seed, int repeats = 3);
SuiteResult suite_projection(uint64_t seed, int vectors = 500);
SuiteResult suite_improvement(uint64_t seed);

const std::vector<std::string>& suite_names();

// Throws InvalidInput on an unknown name.
SuiteResult run_suite(const std::string& name, uint64_t seed);

// Projection onto {|z|_1 <= M} by enumerating supports and keeping the one
// that satisfies the KKT conditions. Exponential in v.size().
std::vector<double> project_l1_oracle(std::span<const double> v, double M);

}  // namespace sparsenode::tools

#endif  // SPARSENODE_TOOLS_SUITES_H_
