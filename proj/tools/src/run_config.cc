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


#include "sparsenode_tools/run_config.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsenode/error.h"
#include "sparsenode/serialization.h"

namespace sparsenode::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-raises a failure inside section `where` with the section prefixed.
template <typename F>
auto in_section(const char* where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(where) + ": " + e.what());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string(where) + ": " + e.what());
  }
}

std::vector<double> flat_rows(const json& rows, int* cols) {
  if (!rows.is_array() || rows.empty()) {
    throw InvalidInput("expected a non-empty array of rows");
  }
  std::vector<double> flat;
  *cols = static_cast<int>(rows.front().size());
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != *cols) {
      throw InvalidInput("rows must be arrays of equal length");
    }
    for (const json& v : row) flat.push_back(v.get<double>());
  }
  return flat;
}

Dataset inline_dataset(const json& spec) {
  Dataset ds;
  const std::string kind = spec.value("kind", std::string("classification"));
  ds.xs = flat_rows(spec.at("xs"), &ds.d);
  if (kind == "classification") {
    ds.kind = DatasetKind::kClassification;
    ds.classes = spec.at("classes").get<std::vector<int>>();
    int m = 0;
    for (int c : ds.classes) m = std::max(m, c + 1);
    ds.m = spec.contains("m") ? require_int(spec, "m") : std::max(m, 2);
  } else if (kind == "regression") {
    ds.kind = DatasetKind::kRegression;
    ds.targets = flat_rows(spec.at("targets"), &ds.m);
  } else {
    throw InvalidInput("unknown dataset kind '" + kind + "'");
  }
  return ds;
}

}  // namespace

Dataset build_dataset(const json& spec, const fs::path& base_dir) {
  if (!spec.is_object()) throw InvalidInput("must be a JSON object");
  const std::string gen = spec.value("generator", std::string());
  const uint64_t seed = spec.value("seed", uint64_t{0});
  Dataset ds;
  if (gen == "circles") {
    ds = gen_circles(require_int(spec, "n"), spec.value("r_in", 1.0),
                     spec.value("r_out", 3.0), spec.value("noise", 0.05), seed);
  } else if (gen == "two_gaussians") {
    ds = gen_two_gaussians(require_int(spec, "n"), spec.value("separation", 4.0),
                           seed);
  } else if (gen == "inline") {
    ds = inline_dataset(spec);
  } else if (gen == "csv") {
    fs::path path = spec.at("path").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open dataset file " + path.string());
    ds = read_dataset_csv(in);
  } else {
    throw InvalidInput("field 'generator' must be one of circles, "
                       "two_gaussians, inline, csv");
  }
  if (spec.value("augment", false)) ds = augment_zero(ds);
  ds.validate();
  return ds;
}

namespace {

ObjectiveSpec parse_objective(const json& j, const Dataset& data) {
  ObjectiveSpec obj;
  if (!j.is_object()) throw InvalidInput("must be a JSON object");
  obj.loss = loss_kind_from_string(j.value(
      "loss", std::string(data.kind == DatasetKind::kClassification
                              ? "cross_entropy"
                              : "least_squares")));
  if (j.contains("output")) {
    obj.output = output_map_from_json(j["output"]);
  } else {
    obj.output = OutputMap::Identity(data.d);
  }
  if (obj.output.d != data.d) {
    throw InvalidInput("output map P must have d = " + std::to_string(data.d) +
                       " columns");
  }
  if (obj.loss == LossKind::kCrossEntropy) {
    if (data.kind != DatasetKind::kClassification) {
      throw InvalidInput("cross_entropy needs a classification dataset");
    }
    obj.classes = data.classes;
  } else {
    if (data.kind != DatasetKind::kRegression) {
      throw InvalidInput("least_squares needs a regression dataset");
    }
    obj.targets = data.targets;
  }
  obj.M = require_number(j, "M");
  if (j.contains("quadrature")) {
    obj.quadrature = quadrature_from_string(j["quadrature"].get<std::string>());
  }
  if (j.contains("penalty_weight")) {
    obj.penalty_weight = require_number(j, "penalty_weight");
  }
  obj.validate();
  return obj;
}

TimeGrid parse_grid(const json& j) {
  const double T = require_number(j, "T");
  if (!(T > 0.0)) throw InvalidInput("field 'T' must be positive");
  if (j.contains("n_t")) return TimeGrid(T, require_int(j, "n_t"));
  const double dt = require_number(j, "dt");
  if (!(dt > 0.0)) throw InvalidInput("field 'dt' must be positive");
  return TimeGrid(T, std::max(1, static_cast<int>(std::lround(T / dt))));
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  RunConfig cfg;
  cfg.dataset_spec = in_section("dataset", [&] { return j.at("dataset"); });
  cfg.data = in_section("dataset",
                        [&] { return build_dataset(cfg.dataset_spec, base_dir); });
  cfg.dynamics = in_section("dynamics", [&] {
    json dyn = j.at("dynamics");
    dyn["d"] = cfg.data.d;
    dyn["n"] = cfg.data.n();
    return dynamics_from_json(dyn);
  });
  cfg.objective = in_section(
      "objective", [&] { return parse_objective(j.at("objective"), cfg.data); });
  cfg.train = in_section("train", [&] {
    return train_config_from_json(j.value("train", json::object()));
  });
  cfg.grid = in_section("grid", [&] { return parse_grid(j.at("grid")); });
  cfg.output = j.value("output", std::string("run"));
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_json_file(path), path.parent_path());
}

json objective_to_json(const ObjectiveSpec& obj) {
  return {{"loss", to_string(obj.loss)},
          {"output", output_map_to_json(obj.output)},
          {"M", obj.M},
          {"quadrature", to_string(obj.quadrature)},
          {"penalty_weight", obj.penalty_weight}};
}

json to_json(const RunConfig& cfg) {
  json dyn = dynamics_to_json(cfg.dynamics);
  dyn.erase("d");
  dyn.erase("n");
  return {{"dataset", cfg.dataset_spec},
          {"dynamics", dyn},
          {"objective", objective_to_json(cfg.objective)},
          {"train", train_config_to_json(cfg.train)},
          {"grid", {{"T", cfg.grid.T()}, {"n_t", cfg.grid.steps()}}},
          {"output", cfg.output}};
}

RunConfig load_run_dir(const fs::path& dir) {
  json j = read_json_file(dir / "config.json");
  j["dataset"] = {{"generator", "csv"}, {"path", "dataset.csv"}};
  RunConfig cfg = parse_run_config(j, dir);
  cfg.dataset_spec = read_json_file(dir / "config.json").at("dataset");
  return cfg;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sparsenode::tools
