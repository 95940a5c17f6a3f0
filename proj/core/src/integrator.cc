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

#include "sparsenode/integrator.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sparsenode/error.h"

namespace sparsenode {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::vector<double>> read_rows(std::istream& is,
                                           std::string* header) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("empty CSV stream");
  *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidInput("non-numeric CSV cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TimeGrid::TimeGrid(double T, int n_t) : T_(T), n_t_(n_t) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidInput("time horizon must be positive and finite");
  }
  if (n_t < 1) throw InvalidInput("time grid needs at least one step");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kEuler ? "euler" : "midpoint";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "euler") return Scheme::kEuler;
  if (name == "midpoint") return Scheme::kMidpoint;
  throw InvalidInput("unknown scheme '" + name + "'");
}

ControlTrajectory::ControlTrajectory(TimeGrid grid, int control_dim)
    : grid_(grid), d_u_(control_dim),
      values_(static_cast<size_t>(grid.steps()) * control_dim, 0.0) {
  if (control_dim < 1) throw InvalidInput("control dimension must be >= 1");
}

ControlTrajectory::ControlTrajectory(TimeGrid grid, int control_dim,
                                     std::vector<double> values)
    : grid_(grid), d_u_(control_dim), values_(std::move(values)) {
  if (control_dim < 1) throw InvalidInput("control dimension must be >= 1");
  if (values_.size() != static_cast<size_t>(grid.steps()) * control_dim) {
    throw InvalidInput("control values do not match steps x control_dim");
  }
}

double ControlTrajectory::l1_norm(int k) const {
  double s = 0.0;
  for (double v : point(k)) s += std::abs(v);
  return s;
}

double ControlTrajectory::l1_cost() const {
  double s = 0.0;
  for (int k = 0; k < steps(); ++k) s += l1_norm(k);
  return grid_.dt() * s;
}

bool ControlTrajectory::admissible(double M) const {
  for (int k = 0; k < steps(); ++k) {
    if (l1_norm(k) > M + 1e-9) return false;
  }
  return true;
}

StateTrajectory::StateTrajectory(TimeGrid grid, int state_dim, Scheme scheme)
    : grid_(grid), dim_(state_dim), scheme_(scheme),
      values_(static_cast<size_t>(grid.steps() + 1) * state_dim, 0.0) {}

void step(const DynamicsSpec& spec, Scheme scheme, double dt,
          std::span<const double> x, std::span<const double> u,
          std::span<double> next) {
  const size_t dim = x.size();
  std::vector<double> f(dim);
  eval_field(spec, x, u, f);
  if (scheme == Scheme::kEuler) {
    for (size_t i = 0; i < dim; ++i) next[i] = x[i] + dt * f[i];
    return;
  }
  std::vector<double> mid(dim);
  for (size_t i = 0; i < dim; ++i) mid[i] = x[i] + 0.5 * dt * f[i];
  eval_field(spec, mid, u, f);
  for (size_t i = 0; i < dim; ++i) next[i] = x[i] + dt * f[i];
}

StateTrajectory integrate(const DynamicsSpec& spec, std::span<const double> x0,
                          const ControlTrajectory& ctrl, Scheme scheme) {
  if (static_cast<int>(x0.size()) != spec.state_dim()) {
    throw InvalidInput("initial state does not match the state dimension");
  }
  if (ctrl.control_dim() != spec.control_dim()) {
    throw InvalidInput("control dimension does not match the dynamics");
  }
  StateTrajectory traj(ctrl.grid(), spec.state_dim(), scheme);
  std::copy(x0.begin(), x0.end(), traj.state(0).begin());
  const double dt = ctrl.grid().dt();
  for (int k = 0; k < ctrl.steps(); ++k) {
    step(spec, scheme, dt, traj.state(k), ctrl.point(k), traj.state(k + 1));
    for (double v : traj.state(k + 1)) {
      if (!std::isfinite(v)) {
        throw DivergenceError(
            "state became non-finite at step " + std::to_string(k), k);
      }
    }
  }
  return traj;
}

ControlTrajectory rescale_control(const ControlTrajectory& ctrl, double T) {
  if (!(T > 0.0)) throw InvalidInput("rescale target horizon must be > 0");
  const double factor = ctrl.grid().T() / T;
  std::vector<double> values = ctrl.values();
  for (double& v : values) v *= factor;
  return ControlTrajectory(TimeGrid(T, ctrl.steps()), ctrl.control_dim(),
                           std::move(values));
}

ControlTrajectory zero_extend(const ControlTrajectory& ctrl, double T) {
  const double T1 = ctrl.grid().T();
  if (T < T1) throw InvalidInput("zero extension needs T >= T1");
  const double ratio = T / ctrl.grid().dt();
  const double whole = std::round(ratio);
  if (std::abs(ratio - whole) > 1e-9 * std::max(1.0, ratio)) {
    const int suggested = static_cast<int>(std::ceil(ratio));
    throw InvalidInput(
        "T = " + fmt_double(T) + " is not a whole number of steps of dt = " +
        fmt_double(ctrl.grid().dt()) + "; use T = " +
        fmt_double(suggested * ctrl.grid().dt()) + " (n_t = " +
        std::to_string(suggested) + ")");
  }
  const int n_t = static_cast<int>(whole);
  std::vector<double> values = ctrl.values();
  values.resize(static_cast<size_t>(n_t) * ctrl.control_dim(), 0.0);
  return ControlTrajectory(TimeGrid(T, n_t), ctrl.control_dim(),
                           std::move(values));
}

void write_csv(std::ostream& os, const ControlTrajectory& ctrl) {
  os << "t";
  for (int j = 0; j < ctrl.control_dim(); ++j) os << ",u_" << j;
  os << "\n";
  for (int k = 0; k < ctrl.steps(); ++k) {
    os << fmt_double(ctrl.grid().node(k));
    for (double v : ctrl.point(k)) os << "," << fmt_double(v);
    os << "\n";
  }
}

void write_csv(std::ostream& os, const StateTrajectory& traj) {
  os << "t";
  for (int j = 0; j < traj.state_dim(); ++j) os << ",x_" << j;
  os << "\n";
  for (int k = 0; k < traj.nodes(); ++k) {
    os << fmt_double(traj.grid().node(k));
    for (double v : traj.state(k)) os << "," << fmt_double(v);
    os << "\n";
  }
}

ControlTrajectory read_control_csv(std::istream& is, const TimeGrid& grid) {
  std::string header;
  const auto rows = read_rows(is, &header);
  if (static_cast<int>(rows.size()) != grid.steps()) {
    throw InvalidInput("control CSV has " + std::to_string(rows.size()) +
                       " rows, grid has " + std::to_string(grid.steps()) +
                       " steps");
  }
  const size_t width = rows.front().size();
  if (width < 2) throw InvalidInput("control CSV has no control columns");
  std::vector<double> values;
  for (const auto& row : rows) {
    if (row.size() != width) throw InvalidInput("ragged control CSV");
    values.insert(values.end(), row.begin() + 1, row.end());
  }
  return ControlTrajectory(grid, static_cast<int>(width - 1),
                           std::move(values));
}

StateTrajectory read_state_csv(std::istream& is, Scheme scheme) {
  std::string header;
  const auto rows = read_rows(is, &header);
  if (rows.size() < 2) throw InvalidInput("state CSV needs at least 2 nodes");
  const size_t width = rows.front().size();
  if (width < 2) throw InvalidInput("state CSV has no state columns");
  TimeGrid grid(rows.back()[0], static_cast<int>(rows.size()) - 1);
  StateTrajectory traj(grid, static_cast<int>(width - 1), scheme);
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != width) throw InvalidInput("ragged state CSV");
    std::copy(rows[k].begin() + 1, rows[k].end(),
              traj.state(static_cast<int>(k)).begin());
  }
  return traj;
}

}  // namespace sparsenode
