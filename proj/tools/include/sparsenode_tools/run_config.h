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


#ifndef SPARSENODE_TOOLS_RUN_CONFIG_H_
#define SPARSENODE_TOOLS_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "sparsenode/datagen.h"
#include "sparsenode/dynamics.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"
#include "sparsenode/optimizer.h"

namespace sparsenode::tools {

// One experiment, reproducible from its JSON form alone.
//
//   {"dataset":   {"generator": "circles", "n": 200, "r_in": 1, "r_out": 3,
//                  "noise": 0.05, "seed": 1, "augment": true},
//    "dynamics":  {"form": "inside", "activation": {"kind": "tanh"}},
//    "objective": {"loss": "cross_entropy", "output": {"P": [[...]], "q": [...]},
//                  "M": 8, "quadrature": "left", "penalty_weight": 1},
//    "train":     {"lr": 0.05, "iters": 5000, "seed": 7, "scheme": "midpoint"},
//    "grid":      {"T": 5, "n_t": 15},
//    "output":    "runs/fig1"}
//
// Dataset generators: "circles", "two_gaussians", "inline" (points given in
// the file) and "csv" (a dataset.csv path, relative to the config file).
// The dynamics dimensions come from the dataset; a missing output map
// defaults to the identity.
struct RunConfig {
  nlohmann::json dataset_spec;
  Dataset data;
  DynamicsSpec dynamics = DynamicsSpec::Inside(1, 1, Activation::Tanh());
  ObjectiveSpec objective;
  TrainConfig train;
  TimeGrid grid{1.0, 1};
  std::string output;
};

Dataset build_dataset(const nlohmann::json& spec,
                      const std::filesystem::path& base_dir);

// Throws InvalidInput with the offending field path.
RunConfig parse_run_config(const nlohmann::json& j,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// The resolved form: every default made explicit.
nlohmann::json to_json(const RunConfig& cfg);

nlohmann::json objective_to_json(const ObjectiveSpec& obj);

// Reloads a run directory: config.json plus the persisted dataset.csv.
RunConfig load_run_dir(const std::filesystem::path& dir);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace sparsenode::tools

#endif  // SPARSENODE_TOOLS_RUN_CONFIG_H_
