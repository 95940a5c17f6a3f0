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

#include "sparsenode/serialization.h"

#include <string>

#include "sparsenode/error.h"

namespace sparsenode {

using nlohmann::json;

namespace {

std::vector<std::vector<double>> to_rows(const std::vector<double>& flat,
                                         int cols) {
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < flat.size(); i += cols) {
    rows.emplace_back(flat.begin() + i, flat.begin() + i + cols);
  }
  return rows;
}

std::vector<double> from_rows(const json& j, const std::string& what,
                              int* cols) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array of rows");
  std::vector<double> flat;
  *cols = -1;
  for (const json& row : j) {
    if (!row.is_array()) throw InvalidInput(what + " must be an array of rows");
    if (*cols < 0) *cols = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != *cols) {
      throw InvalidInput(what + " has rows of different lengths");
    }
    for (const json& v : row) {
      if (!v.is_number()) throw InvalidInput(what + " must hold numbers");
      flat.push_back(v.get<double>());
    }
  }
  if (*cols < 0) *cols = 0;
  return flat;
}

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidInput(what + " must be an array");
  std::vector<double> v;
  for (const json& x : j) {
    if (!x.is_number()) throw InvalidInput(what + " must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

json mask_to_json(const std::vector<StepClass>& mask) {
  json arr = json::array();
  for (StepClass c : mask) arr.push_back(to_string(c));
  return arr;
}

}  // namespace

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw InvalidInput(std::string("field '") + key + "' must be a number");
  }
  return j[key].get<double>();
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw InvalidInput(std::string("field '") + key + "' must be an integer");
  }
  return j[key].get<int>();
}

json dynamics_to_json(const DynamicsSpec& spec) {
  json j;
  j["form"] = to_string(spec.form());
  j["d"] = spec.d();
  j["n"] = spec.n();
  json act;
  act["kind"] = to_string(spec.activation().kind);
  if (spec.activation().kind == ActivationKind::kLeakyRelu) {
    act["a"] = spec.activation().slope;
  }
  j["activation"] = act;
  json fields = json::array();
  for (const AffineField& f : spec.fields()) {
    fields.push_back({{"A", to_rows(f.A, spec.state_dim())}, {"c", f.c}});
  }
  j["fields"] = fields;
  return j;
}

DynamicsSpec dynamics_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("dynamics must be a JSON object");
  if (!j.contains("form") || !j["form"].is_string()) {
    throw InvalidInput("field 'form' must be a string");
  }
  const DynamicsForm form = dynamics_form_from_string(j["form"].get<std::string>());
  const int d = require_int(j, "d");
  const int n = require_int(j, "n");
  Activation act = Activation::Tanh();
  if (j.contains("activation")) {
    const json& a = j["activation"];
    if (!a.contains("kind") || !a["kind"].is_string()) {
      throw InvalidInput("field 'activation.kind' must be a string");
    }
    act.kind = activation_kind_from_string(a["kind"].get<std::string>());
    if (act.kind == ActivationKind::kLeakyRelu) {
      act = Activation::LeakyRelu(a.contains("a") ? require_number(a, "a") : 0.01);
    }
  } else if (form != DynamicsForm::kInsideSigma) {
    act = Activation::Identity();
  }
  std::vector<AffineField> fields;
  if (j.contains("fields")) {
    for (const json& f : j["fields"]) {
      AffineField field;
      int cols = 0;
      field.A = from_rows(f.at("A"), "field A", &cols);
      field.c = number_array(f.at("c"), "field c");
      fields.push_back(std::move(field));
    }
  }
  return DynamicsSpec(form, d, n, act, std::move(fields));
}

json output_map_to_json(const OutputMap& out) {
  return {{"P", to_rows(out.P, out.d)}, {"q", out.q}};
}

OutputMap output_map_from_json(const json& j) {
  OutputMap out;
  int cols = 0;
  out.P = from_rows(j.at("P"), "output map P", &cols);
  out.d = cols;
  out.m = cols > 0 ? static_cast<int>(out.P.size()) / cols : 0;
  out.q = j.contains("q") ? number_array(j["q"], "output map q")
                          : std::vector<double>(out.m, 0.0);
  if (out.m < 1 || static_cast<int>(out.q.size()) != out.m) {
    throw InvalidInput("output map needs P of size m x d and q of size m");
  }
  return out;
}

json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["lr"] = cfg.adam.lr;
  j["beta1"] = cfg.adam.beta1;
  j["beta2"] = cfg.adam.beta2;
  j["eps"] = cfg.adam.eps;
  j["iters"] = cfg.iters;
  j["seed"] = cfg.seed;
  j["init"] = {{"kind", to_string(cfg.init)}, {"scale", cfg.init_scale}};
  j["scheme"] = to_string(cfg.scheme);
  j["prox"] = to_string(cfg.prox);
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  if (!j.is_object()) throw InvalidInput("train config must be a JSON object");
  if (j.contains("lr")) cfg.adam.lr = require_number(j, "lr");
  if (j.contains("beta1")) cfg.adam.beta1 = require_number(j, "beta1");
  if (j.contains("beta2")) cfg.adam.beta2 = require_number(j, "beta2");
  if (j.contains("eps")) cfg.adam.eps = require_number(j, "eps");
  if (j.contains("iters")) cfg.iters = require_int(j, "iters");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) {
      throw InvalidInput("field 'seed' must be an integer");
    }
    cfg.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("init")) {
    const json& init = j["init"];
    if (init.is_string()) {
      cfg.init = init_kind_from_string(init.get<std::string>());
    } else {
      cfg.init = init_kind_from_string(init.at("kind").get<std::string>());
      if (init.contains("scale")) cfg.init_scale = require_number(init, "scale");
    }
  }
  if (j.contains("scheme")) {
    cfg.scheme = scheme_from_string(j["scheme"].get<std::string>());
  }
  if (j.contains("prox")) {
    cfg.prox = prox_scaling_from_string(j["prox"].get<std::string>());
  }
  cfg.validate();
  return cfg;
}

json control_to_json(const ControlTrajectory& ctrl) {
  return {{"T", ctrl.grid().T()},
          {"n_t", ctrl.steps()},
          {"d_u", ctrl.control_dim()},
          {"values", to_rows(ctrl.values(), ctrl.control_dim())}};
}

ControlTrajectory control_from_json(const json& j) {
  int cols = 0;
  std::vector<double> values = from_rows(j.at("values"), "control values", &cols);
  const int d_u = require_int(j, "d_u");
  if (cols != d_u) throw InvalidInput("control rows must have d_u entries");
  return ControlTrajectory(TimeGrid(require_number(j, "T"), require_int(j, "n_t")),
                           d_u, std::move(values));
}

json report_to_json(const SparsityReport& r) {
  json j;
  j["T"] = r.T;
  j["M"] = r.M;
  j["Tstar"] = r.stop.Tstar;
  j["idx"] = r.stop.idx;
  j["Tstar_at_boundary"] = r.stop.at_boundary;
  j["E_at_Tstar"] = r.E_at_Tstar;
  j["E_initial"] = r.E_initial;
  j["E_final"] = r.E_final;
  j["frac_saturated_before"] = r.frac_saturated_before;
  j["frac_zero_after"] = r.frac_zero_after;
  j["frac_bang_bang"] = r.frac_bang_bang;
  j["intermediate_steps"] = r.intermediate_steps;
  j["sat_mask"] = mask_to_json(r.sat_mask);
  j["bounds"] = {{"C_Tstar", r.bound_Tstar}, {"C_E", r.bound_E}};
  j["J"] = r.value.J;
  j["running"] = r.value.running;
  j["penalty"] = r.value.penalty;
  return j;
}

json bound_fit_to_json(const BoundFit& fit) {
  auto constant = [](const ConstantFit& c) {
    return json{{"C", c.C},
                {"slack", c.slack},
                {"covers_all", c.covers_all},
                {"implied", c.implied}};
  };
  return {{"Tstar_bound", constant(fit.tstar)},
          {"E_bound", constant(fit.error)},
          {"varies_T", fit.varies_T},
          {"varies_M", fit.varies_M},
          {"E_nonincreasing_in_T", fit.error_nonincreasing_in_T},
          {"Tstar_nonincreasing_in_M", fit.tstar_nonincreasing_in_M}};
}

json turnpike_to_json(const TurnpikeReport& r) {
  return {{"Tstar", r.stop.Tstar},
          {"idx", r.stop.idx},
          {"Tstar_at_boundary", r.stop.at_boundary},
          {"max_state_deviation_after_Tstar", r.max_state_deviation_after_Tstar},
          {"CT_product", r.CT_product},
          {"frac_bang_bang", r.frac_bang_bang},
          {"sat_mask", mask_to_json(r.sat_mask)}};
}

}  // namespace sparsenode
