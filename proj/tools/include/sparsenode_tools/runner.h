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


#ifndef SPARSENODE_TOOLS_RUNNER_H_
#define SPARSENODE_TOOLS_RUNNER_H_

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sparsenode/analysis.h"
#include "sparsenode/optimizer.h"
#include "sparsenode_tools/run_config.h"

namespace sparsenode::tools {

struct TrainOptions {
  int checkpoint_every = 0;  // 0 disables checkpoints/
  bool grad_norms = false;   // grad_norms.csv at the final iterate
};

// Sparsity report of a control, extended with tol_quad, the change of J
// under zero extension after T*, the margin at T* (classification) and a
// turnpike block (driftless least squares with the identity output).
nlohmann::json analyze_control(const RunConfig& cfg,
                               const ControlTrajectory& ctrl,
                               const StateTrajectory& traj);

// Trains and writes the run directory. Returns the report.
nlohmann::json run_train(const RunConfig& cfg, const std::filesystem::path& dir,
                         const TrainOptions& opts = {});

// Recomputes report.json from the files of a run directory.
nlohmann::json run_analyze(const std::filesystem::path& dir);

struct SweepAxis {
  std::string name;  // "T" or "M"
  std::vector<double> values;
};

// "T=1,2,4,8" or "M=2,4,8,16".
SweepAxis parse_axis(const std::string& text);

// The base config with one axis value applied. A T value keeps dt fixed.
RunConfig with_axis_value(const RunConfig& base, const std::string& axis,
                          double value);

struct SweepRow {
  double value = 0.0;
  std::string dir;
  bool ok = false;
  std::string error;
  RunPoint point;
  int n_t = 0;
  double max_dev_after_Tstar = 0.0;  // driftless runs only
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool fitted = false;
  BoundFit fit;
};

// One run directory per value under `dir`, sweep.csv and bounds.json.
// Failed runs are recorded and the sweep continues.
SweepResult run_sweep(const RunConfig& base, const SweepAxis& axis,
                      const std::filesystem::path& dir, int jobs,
                      const TrainOptions& opts = {});

}  // namespace sparsenode::tools

#endif  // SPARSENODE_TOOLS_RUNNER_H_
