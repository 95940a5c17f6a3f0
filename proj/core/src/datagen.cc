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

#include "sparsenode/datagen.h"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "sparsenode/error.h"

namespace sparsenode {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

void Dataset::validate() const {
  if (d < 1 || xs.empty() || xs.size() % d != 0) {
    throw InvalidInput("dataset needs n >= 1 points of dimension d >= 1");
  }
  const int count = n();
  if (kind == DatasetKind::kClassification) {
    if (static_cast<int>(classes.size()) != count) {
      throw InvalidInput("dataset needs one class label per point");
    }
    for (int y : classes) {
      if (y < 0 || y >= m) throw InvalidInput("class label outside [0, m)");
    }
  } else if (static_cast<int>(targets.size()) != count * m) {
    throw InvalidInput("dataset needs n x m regression targets");
  }
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      bool same = true;
      for (int c = 0; c < d && same; ++c) same = point(i)[c] == point(j)[c];
      if (same) {
        throw InvalidInput("points " + std::to_string(i) + " and " +
                           std::to_string(j) + " coincide");
      }
    }
  }
}

Dataset gen_two_gaussians(int n, double separation, uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InvalidInput("n must be even and >= 2");
  if (!(separation > 0.0)) throw InvalidInput("separation must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset ds;
  ds.d = 2;
  ds.m = 2;
  for (int i = 0; i < n; ++i) {
    const int y = i < n / 2 ? 0 : 1;
    const double cx = (y == 0 ? -0.5 : 0.5) * separation;
    ds.xs.push_back(cx + noise(rng));
    ds.xs.push_back(noise(rng));
    ds.classes.push_back(y);
  }
  return ds;
}

Dataset gen_circles(int n, double r_in, double r_out, double noise,
                    uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InvalidInput("n must be even and >= 2");
  if (!(r_in > 0.0 && r_in < r_out)) {
    throw InvalidInput("radii must satisfy 0 < r_in < r_out");
  }
  if (!(noise >= 0.0)) throw InvalidInput("noise must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> radial(0.0, 1.0);
  Dataset ds;
  ds.d = 2;
  ds.m = 2;
  for (int i = 0; i < n; ++i) {
    const int y = i < n / 2 ? 0 : 1;
    const double a = angle(rng);
    const double eta = radial(rng);
    const double r = (y == 0 ? r_in : r_out) + noise * eta;
    ds.xs.push_back(r * std::cos(a));
    ds.xs.push_back(r * std::sin(a));
    ds.classes.push_back(y);
  }
  return ds;
}

Dataset augment_zero(const Dataset& ds) {
  Dataset out = ds;
  out.d = ds.d + 1;
  out.xs.clear();
  out.xs.reserve(static_cast<size_t>(ds.n()) * out.d);
  for (int i = 0; i < ds.n(); ++i) {
    const auto p = ds.point(i);
    out.xs.insert(out.xs.end(), p.begin(), p.end());
    out.xs.push_back(0.0);
  }
  return out;
}

bool separability_check(const Dataset& ds, int max_epochs) {
  if (ds.kind != DatasetKind::kClassification || ds.m > 2) {
    throw InvalidInput("separability check needs a binary classification set");
  }
  for (int y : ds.classes) {
    if (y > 1) throw InvalidInput("separability check needs two classes");
  }
  const int d = ds.d;
  std::vector<double> w(d + 1, 0.0);  // last entry is the bias
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    bool clean = true;
    for (int i = 0; i < ds.n(); ++i) {
      const double s = ds.classes[i] == 1 ? 1.0 : -1.0;
      const auto x = ds.point(i);
      double act = w[d];
      for (int c = 0; c < d; ++c) act += w[c] * x[c];
      if (s * act <= 0.0) {
        for (int c = 0; c < d; ++c) w[c] += s * x[c];
        w[d] += s;
        clean = false;
      }
    }
    if (clean) return true;
  }
  return false;
}

void write_csv(std::ostream& os, const Dataset& ds) {
  for (int c = 0; c < ds.d; ++c) os << (c ? "," : "") << "x_" << c;
  if (ds.kind == DatasetKind::kClassification) {
    os << ",y\n";
  } else {
    for (int j = 0; j < ds.m; ++j) os << ",y_" << j;
    os << "\n";
  }
  for (int i = 0; i < ds.n(); ++i) {
    const auto p = ds.point(i);
    for (int c = 0; c < ds.d; ++c) os << (c ? "," : "") << fmt_double(p[c]);
    if (ds.kind == DatasetKind::kClassification) {
      os << "," << ds.classes[i] << "\n";
    } else {
      for (int j = 0; j < ds.m; ++j) {
        os << "," << fmt_double(ds.targets[static_cast<size_t>(i) * ds.m + j]);
      }
      os << "\n";
    }
  }
}

Dataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidInput("empty dataset CSV");
  const std::vector<std::string> header = split(line);
  Dataset ds;
  int ycols = 0;
  for (const std::string& h : header) {
    if (h.rfind("x_", 0) == 0) ++ds.d;
    else if (h == "y") ds.kind = DatasetKind::kClassification, ycols = 1;
    else if (h.rfind("y_", 0) == 0) ds.kind = DatasetKind::kRegression, ++ycols;
    else throw InvalidInput("unexpected dataset column '" + h + "'");
  }
  if (ds.d == 0 || ycols == 0) {
    throw InvalidInput("dataset CSV needs x_* and y columns");
  }
  if (ds.kind == DatasetKind::kRegression) ds.m = ycols;
  int max_class = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (static_cast<int>(cells.size()) != ds.d + ycols) {
      throw InvalidInput("ragged dataset CSV");
    }
    try {
      for (int c = 0; c < ds.d; ++c) ds.xs.push_back(std::stod(cells[c]));
      if (ds.kind == DatasetKind::kClassification) {
        const int y = std::stoi(cells[ds.d]);
        ds.classes.push_back(y);
        max_class = std::max(max_class, y);
      } else {
        for (int j = 0; j < ycols; ++j) {
          ds.targets.push_back(std::stod(cells[ds.d + j]));
        }
      }
    } catch (const std::invalid_argument&) {
      throw InvalidInput("non-numeric cell in dataset CSV");
    }
  }
  if (ds.kind == DatasetKind::kClassification) ds.m = std::max(2, max_class + 1);
  return ds;
}

}  // namespace sparsenode
