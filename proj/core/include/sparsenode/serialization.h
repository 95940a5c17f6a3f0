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

#ifndef SPARSENODE_SERIALIZATION_H_
#define SPARSENODE_SERIALIZATION_H_

#include <nlohmann/json.hpp>

#include "sparsenode/analysis.h"
#include "sparsenode/datagen.h"
#include "sparsenode/dynamics.h"
#include "sparsenode/integrator.h"
#include "sparsenode/objective.h"
#include "sparsenode/optimizer.h"

namespace sparsenode {

// {"form": "inside"|"outside"|"driftless", "d": int, "n": int,
//  "activation": {"kind": str, "a": float?},
//  "fields": [{"A": [[...], ...], "c": [...]}, ...]}
nlohmann::json dynamics_to_json(const DynamicsSpec& spec);
DynamicsSpec dynamics_from_json(const nlohmann::json& j);

// {"P": [[...]], "q": [...]}
nlohmann::json output_map_to_json(const OutputMap& out);
OutputMap output_map_from_json(const nlohmann::json& j);

// {"lr", "beta1", "beta2", "eps", "iters", "seed",
//  "init": {"kind": "zeros"|"uniform_small", "scale": float?},
//  "scheme": "euler"|"midpoint", "prox": "plain"|"preconditioned"}
// Missing keys keep their defaults.
nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Checkpoint: {"T", "n_t", "d_u", "values": [[...], ...]}
nlohmann::json control_to_json(const ControlTrajectory& ctrl);
ControlTrajectory control_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SparsityReport& r);
nlohmann::json bound_fit_to_json(const BoundFit& fit);
nlohmann::json turnpike_to_json(const TurnpikeReport& r);

// Fails with InvalidInput naming the offending key.
double require_number(const nlohmann::json& j, const char* key);
int require_int(const nlohmann::json& j, const char* key);

}  // namespace sparsenode

#endif  // SPARSENODE_SERIALIZATION_H_
