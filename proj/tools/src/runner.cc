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


#include "sparsenode_tools/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "sparsenode/adjoint.h"
#include "sparsenode/error.h"
#include "sparsenode/serialization.h"

namespace sparsenode::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

bool turnpike_applies(const RunConfig& cfg) {
  const OutputMap& out = cfg.objective.output;
  if (cfg.dynamics.form() != DynamicsForm::kDriftlessAffine ||
      cfg.objective.loss != LossKind::kLeastSquares || out.m != out.d) {
    return false;
  }
  const OutputMap id = OutputMap::Identity(out.d);
  return out.P == id.P && out.q == id.q;
}

void write_history(const fs::path& path,
                   const std::vector<FunctionalValue>& history) {
  std::ofstream out = open_out(path);
  out << "iter,J,running,penalty\n";
  for (size_t j = 0; j < history.size(); ++j) {
    out << j << ',' << fmt(history[j].J) << ',' << fmt(history[j].running)
        << ',' << fmt(history[j].penalty) << '\n';
  }
}

// One row per node; the control column holds |u_k|_1 of the step starting
// at the node, and the last node repeats the final step.
void write_metrics(const fs::path& path, const StateTrajectory& traj,
                   const ControlTrajectory& ctrl, const ObjectiveSpec& obj) {
  const std::vector<double> E = error_profile(traj, obj);
  std::ofstream out = open_out(path);
  out << "t,E,u_l1\n";
  for (int k = 0; k < traj.nodes(); ++k) {
    const int step = std::min(k, ctrl.steps() - 1);
    out << fmt(traj.grid().node(k)) << ',' << fmt(E[k]) << ','
        << fmt(ctrl.l1_norm(step)) << '\n';
  }
}

void write_dataset(const fs::path& dir, const RunConfig& cfg) {
  std::ofstream csv = open_out(dir / "dataset.csv");
  write_csv(csv, cfg.data);
  json side = {{"kind", cfg.data.kind == DatasetKind::kClassification
                            ? "classification"
                            : "regression"},
               {"d", cfg.data.d},
               {"n", cfg.data.n()},
               {"m", cfg.data.m},
               {"generator", cfg.dataset_spec}};
  write_json_file(dir / "dataset.json", side);
}

json summarize(const TrainResult& res) {
  const auto& h = res.history;
  bool monotone = true;
  for (size_t j = 1; j < h.size(); ++j) monotone &= h[j].J <= h[j - 1].J;
  return {{"iters", static_cast<int>(h.size()) - 1},
          {"J_initial", h.front().J},
          {"J_final", h.back().J},
          {"J_best", std::min_element(h.begin(), h.end(),
                                      [](const auto& a, const auto& b) {
                                        return a.J < b.J;
                                      })->J},
          {"history_monotone", monotone}};
}

}  // namespace

json analyze_control(const RunConfig& cfg, const ControlTrajectory& ctrl,
                     const StateTrajectory& traj) {
  const SparsityReport rep = sparsity_report(traj, ctrl, cfg.objective);
  json j = report_to_json(rep);
  j["tol_quad"] = quadrature_tolerance(traj, cfg.objective);
  const ControlTrajectory cut = truncate_after(ctrl, rep.stop.idx);
  const StateTrajectory cut_traj =
      integrate(cfg.dynamics, cfg.data.xs, cut, traj.scheme());
  j["zero_extension_delta_J"] =
      functional_J(cut_traj, cut, cfg.objective).J - rep.value.J;
  if (cfg.objective.loss == LossKind::kCrossEntropy &&
      cfg.objective.output.m >= 2) {
    j["margin_at_Tstar"] = margin(traj.state(rep.stop.idx), cfg.objective.output,
                                  cfg.objective.classes);
  }
  if (turnpike_applies(cfg)) {
    j["turnpike"] = turnpike_to_json(turnpike_check(
        cfg.dynamics, cfg.objective.targets, 2, traj, ctrl, cfg.objective.M));
  }
  return j;
}

json run_train(const RunConfig& cfg, const fs::path& dir,
               const TrainOptions& opts) {
  fs::create_directories(dir);
  write_json_file(dir / "config.json", to_json(cfg));
  write_dataset(dir, cfg);

  TrainObserver observer;
  if (opts.checkpoint_every > 0) {
    fs::create_directories(dir / "checkpoints");
    observer = [&](int iter, const ControlTrajectory& ctrl) {
      if (iter % opts.checkpoint_every != 0) return;
      char name[32];
      std::snprintf(name, sizeof name, "iter_%07d.json", iter);
      write_json_file(dir / "checkpoints" / name, control_to_json(ctrl));
    };
  }
  const TrainResult res = train(cfg.dynamics, cfg.data.xs, cfg.objective,
                                cfg.grid, cfg.train, observer);

  write_history(dir / "history.csv", res.history);
  {
    std::ofstream out = open_out(dir / "controls.csv");
    write_csv(out, res.ctrl);
  }
  {
    std::ofstream out = open_out(dir / "trajectory.csv");
    write_csv(out, res.traj);
  }
  write_metrics(dir / "metrics.csv", res.traj, res.ctrl, cfg.objective);
  if (opts.grad_norms) {
    const Gradient g =
        grad_running(cfg.dynamics, res.traj, res.ctrl, cfg.objective);
    std::ofstream out = open_out(dir / "grad_norms.csv");
    write_gradient_norms_csv(out, g, cfg.grid);
  }
  const json report = analyze_control(cfg, res.ctrl, res.traj);
  json summary = summarize(res);
  summary["Tstar"] = report["Tstar"];
  summary["E_at_Tstar"] = report["E_at_Tstar"];
  write_json_file(dir / "summary.json", summary);
  write_json_file(dir / "report.json", report);
  return report;
}

json run_analyze(const fs::path& dir) {
  const RunConfig cfg = load_run_dir(dir);
  std::ifstream in(dir / "controls.csv");
  if (!in) throw InvalidInput("missing " + (dir / "controls.csv").string());
  const ControlTrajectory ctrl = read_control_csv(in, cfg.grid);
  if (ctrl.control_dim() != cfg.dynamics.control_dim()) {
    throw InvalidInput("controls.csv does not match the configured dynamics");
  }
  const StateTrajectory traj =
      integrate(cfg.dynamics, cfg.data.xs, ctrl, cfg.train.scheme);
  const json report = analyze_control(cfg, ctrl, traj);
  write_json_file(dir / "report.json", report);
  write_metrics(dir / "metrics.csv", traj, ctrl, cfg.objective);
  return report;
}

SweepAxis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw InvalidInput("axis must look like T=1,2,4 or M=2,4,8");
  }
  SweepAxis axis;
  axis.name = text.substr(0, eq);
  if (axis.name != "T" && axis.name != "M") {
    throw InvalidInput("axis name must be T or M, got '" + axis.name + "'");
  }
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
      axis.values.push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidInput("axis value '" + item + "' is not a positive number");
    }
  }
  if (axis.values.empty()) throw InvalidInput("axis has no values");
  return axis;
}

RunConfig with_axis_value(const RunConfig& base, const std::string& axis,
                          double value) {
  RunConfig cfg = base;
  if (axis == "T") {
    const double dt = base.grid.dt();
    const int n_t = std::max(1, static_cast<int>(std::lround(value / dt)));
    cfg.grid = TimeGrid(value, n_t);
  } else if (axis == "M") {
    cfg.objective.M = value;
    cfg.objective.validate();
  } else {
    throw InvalidInput("axis name must be T or M");
  }
  return cfg;
}

SweepResult run_sweep(const RunConfig& base, const SweepAxis& axis,
                      const fs::path& dir, int jobs, const TrainOptions& opts) {
  fs::create_directories(dir);
  SweepResult result;
  result.rows.resize(axis.values.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < axis.values.size(); i = next++) {
      SweepRow& row = result.rows[i];
      row.value = axis.values[i];
      row.dir = axis.name + "_" + fmt(row.value);
      try {
        RunConfig cfg = with_axis_value(base, axis.name, row.value);
        cfg.output = (dir / row.dir).string();
        row.n_t = cfg.grid.steps();
        const json rep = run_train(cfg, dir / row.dir, opts);
        row.point = {cfg.grid.T(), cfg.objective.M, rep["Tstar"].get<double>(),
                     rep["E_at_Tstar"].get<double>()};
        if (rep.contains("turnpike")) {
          row.max_dev_after_Tstar =
              rep["turnpike"]["max_state_deviation_after_Tstar"].get<double>();
        }
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const int n_workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(axis.values.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::vector<RunPoint> points;
  for (const SweepRow& row : result.rows) {
    if (row.ok) points.push_back(row.point);
  }
  json bounds = {{"axis", axis.name}, {"runs", points.size()}};
  try {
    result.fit = check_theorem_bounds(points);
    result.fitted = true;
    bounds["fit"] = bound_fit_to_json(result.fit);
  } catch (const InvalidInput& e) {
    bounds["fit"] = nullptr;
    bounds["reason"] = e.what();
  }
  write_json_file(dir / "bounds.json", bounds);

  std::ofstream out = open_out(dir / "sweep.csv");
  out << "T,M,n_t,Tstar,E_at_Tstar,product_ET,max_dev_after_Tstar,status\n";
  for (const SweepRow& row : result.rows) {
    if (row.ok) {
      const RunPoint& p = row.point;
      out << fmt(p.T) << ',' << fmt(p.M) << ',' << row.n_t << ','
          << fmt(p.Tstar) << ',' << fmt(p.E_at_Tstar) << ','
          << fmt(p.E_at_Tstar * p.T) << ',' << fmt(row.max_dev_after_Tstar)
          << ",ok\n";
    } else {
      const bool is_T = axis.name == "T";
      std::string err = row.error;
      std::replace(err.begin(), err.end(), ',', ';');
      std::replace(err.begin(), err.end(), '\n', ' ');
      out << fmt(is_T ? row.value : base.grid.T()) << ','
          << fmt(is_T ? base.objective.M : row.value) << ',' << row.n_t
          << ",,,,,failed: " << err << '\n';
    }
  }
  return result;
}

}  // namespace sparsenode::tools
