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

#ifndef SPARSENODE_ERROR_H_
#define SPARSENODE_ERROR_H_

#include <stdexcept>
#include <string>

namespace sparsenode {

// Raised for malformed or inconsistent inputs (dimension mismatches,
// out-of-range parameters, misaligned grids, violated preconditions).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A forward or backward sweep produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int step)
      : std::runtime_error(what), step_(step) {}

  // Time step (or optimizer iteration, when raised by train) at which the
  // non-finite value appeared.
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace sparsenode

#endif  // SPARSENODE_ERROR_H_
