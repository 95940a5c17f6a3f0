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


// Acceptance gate: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparsenode/analysis.h"
#include "sparsenode/objective.h"
#include "sparsenode_tools/run_config.h"
#include "sparsenode_tools/runner.h"
#include "sparsenode_tools/suites.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparsenode;
using namespace sparsenode::tools;

namespace {

constexpr uint64_t kSuiteSeed = 20260101;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runtime budget; appended to the detail and folded into the verdict.
Outcome within(Outcome o, const Clock& clock, double budget) {
  const double s = clock.seconds();
  o.detail += fmt(" runtime=%.1fs", s) + fmt(" (budget %.0fs)", budget);
  if (s > budget) {
    o.pass = false;
    o.detail += " OVER BUDGET";
  }
  return o;
}

Outcome from_suite(const SuiteResult& r) {
  return {r.passed, r.detail};
}

RunConfig config(const std::string& name) {
  return load_run_config(fs::path(SPARSENODE_CONFIG_DIR) / name);
}

class Gate {
 public:
  explicit Gate(fs::path work) : work_(std::move(work)) {}

  Outcome scaling() {
    Clock c;
    return within(from_suite(suite_scaling(kSuiteSeed, 100)), c, 5);
  }

  Outcome homogeneity() {
    Clock c;
    return within(from_suite(suite_homogeneity(kSuiteSeed, 1000)), c, 1);
  }

  Outcome gradient() {
    Clock c;
    const SuiteResult r = suite_gradient(kSuiteSeed, 3);
    Outcome o = from_suite(r);
    if (r.instances < 20) {
      o.pass = false;
      o.detail += " (fewer than 20 instances)";
    }
    return within(o, c, 30);
  }

  Outcome projection() { return from_suite(suite_projection(kSuiteSeed, 500)); }

  Outcome improvement() { return from_suite(suite_improvement(kSuiteSeed)); }

  Outcome sparsity() {
    Clock c;
    const RunConfig cfg = config("fig1.json");
    fig1_ = run_train(cfg, work_ / "fig1");
    const double T = cfg.grid.T();
    const double Tstar = fig1_["Tstar"];
    const double bang = fig1_["frac_bang_bang"];
    const double zero_after = fig1_["frac_zero_after"];
    const double dJ = fig1_["zero_extension_delta_J"];
    const double tol = fig1_["tol_quad"];
    Outcome o;
    o.pass = bang >= 0.9 && Tstar > 0.0 && Tstar < T && zero_after == 1.0 &&
             std::abs(dJ) <= tol;
    o.detail = fmt("bang_bang=%.3f", bang) + fmt(" T*=%.4g", Tstar) +
               fmt(" zero_after=%.3f", zero_after) +
               fmt(" |dJ_zero_ext|=%.3g", std::abs(dJ)) +
               fmt(" tol_quad=%.3g", tol) +
               (Tstar >= 0.5 && Tstar <= 3.5 ? " [T* in 0.5..3.5]"
                                             : " [T* outside 0.5..3.5]");
    return within(o, c, 120);
  }

  Outcome decay_in_T() {
    Clock c;
    const SweepResult s =
        run_sweep(config("ls1d.json"), parse_axis("T=1,2,4,8"),
                  work_ / "sweep_T", 1);
    std::vector<double> products;
    std::vector<RunPoint> points;
    Outcome o;
    for (const SweepRow& r : s.rows) {
      if (!r.ok) return {false, "run " + r.dir + " failed: " + r.error};
      products.push_back(r.point.E_at_Tstar * r.point.T);
      points.push_back(r.point);
      o.detail += fmt("T=%g:", r.point.T) + fmt("E*T=%.4g ", products.back());
    }
    std::vector<double> sorted = products;
    std::sort(sorted.begin(), sorted.end());
    const double median = 0.5 * (sorted[1] + sorted[2]);
    bool factor2 = true;
    for (double p : products) {
      if (p > 2.0 * median || p < 0.5 * median) factor2 = false;
    }
    const BoundFit fit = check_theorem_bounds(points, 0.1);
    o.pass = factor2 && fit.error_nonincreasing_in_T;
    o.detail += fmt("median=%.4g", median) +
                std::string(" within_factor_2=") + (factor2 ? "yes" : "no") +
                " E_nonincreasing=" +
                (fit.error_nonincreasing_in_T ? "yes" : "no");
    return within(o, c, 180);
  }

  Outcome tstar_in_M() {
    const RunConfig base = config("ls1d.json");
    const SweepResult s = run_sweep(base, parse_axis("M=2,4,8,16"),
                                    work_ / "sweep_M", 1);
    std::vector<RunPoint> points;
    Outcome o;
    for (const SweepRow& r : s.rows) {
      if (!r.ok) return {false, "run " + r.dir + " failed: " + r.error};
      points.push_back(r.point);
      o.detail += fmt("M=%g:", r.point.M) + fmt("T*=%.4g ", r.point.Tstar);
    }
    const BoundFit fit = check_theorem_bounds(points, 0.1, base.grid.dt());
    o.pass = fit.tstar_nonincreasing_in_M && fit.tstar.covers_all;
    o.detail += std::string("nonincreasing=") +
                (fit.tstar_nonincreasing_in_M ? "yes" : "no") +
                fmt(" C=%.4g", fit.tstar.C) +
                " covers_all=" + (fit.tstar.covers_all ? "yes" : "no");
    return o;
  }

  Outcome turnpike() {
    Clock c;
    const RunConfig base = config("turnpike1d.json");
    turnpike_ = run_train(base, work_ / "turnpike");
    const json& tp = turnpike_.at("turnpike");
    const double bang = tp["frac_bang_bang"];
    const double dev = tp["max_state_deviation_after_Tstar"];
    const SweepResult s =
        run_sweep(base, parse_axis("T=2,4,8"), work_ / "turnpike_T", 1);
    double C = 0.0;
    std::vector<double> products;
    for (const SweepRow& r : s.rows) {
      if (!r.ok) return {false, "run " + r.dir + " failed: " + r.error};
      products.push_back(r.max_dev_after_Tstar * r.point.T);
      C = std::max(C, products.back());
    }
    bool covered = true;
    for (double p : products) covered = covered && p <= C;
    Outcome o;
    o.pass = bang >= 0.9 && dev <= 1e-2 && covered;
    o.detail = fmt("bang_bang=%.3f", bang) + fmt(" max_dev=%.4g", dev) +
               " (limit 1e-2)" + fmt(" C=%.4g", C) + " products=";
    for (double p : products) o.detail += fmt("%.4g,", p);
    o.detail.pop_back();
    return within(o, c, 60);
  }

  Outcome h_machinery() {
    double worst = 0.0;
    int points = 0;
    for (double gamma : {0.5, 1.0, 2.0}) {
      for (int m : {2, 5}) {
        for (int i = 0; i < 17 && points < 100; ++i, ++points) {
          const double t = -3.0 + 6.0 * i / 16.0;
          worst = std::max(worst,
                           std::abs(h_inverse(gamma, m, h_bound(gamma, m, t)) - t));
        }
      }
    }
    bool monotone = true;
    for (int m : {2, 5}) {
      double prev = h_bound(1.0, m, -5.0);
      for (int i = 1; i <= 1000; ++i) {
        const double v = h_bound(1.0, m, -5.0 + 10.0 * i / 1000.0);
        monotone = monotone && v <= prev;
        prev = v;
      }
    }
    Outcome o;
    o.detail = fmt("round_trip_max=%.3g", worst) + fmt(" on %g points", points) +
               " monotone=" + (monotone ? "yes" : "no");
    bool margin_ok = false;
    if (fig1_.contains("margin_at_Tstar")) {
      const double mg = fig1_["margin_at_Tstar"];
      margin_ok = mg > 0.0;
      o.detail += fmt(" margin_at_T*=%.4g", mg);
    } else {
      o.detail += " margin_at_T*=unavailable";
    }
    o.pass = points == 100 && worst <= 1e-10 && monotone && margin_ok;
    return o;
  }

  Outcome determinism() {
    if (fig1_.is_null() || turnpike_.is_null()) {
      return {false, "needs the sparsity and turnpike runs"};
    }
    run_train(config("fig1.json"), work_ / "fig1_repeat");
    run_train(config("turnpike1d.json"), work_ / "turnpike_repeat");
    const bool a = slurp(work_ / "fig1" / "report.json") ==
                   slurp(work_ / "fig1_repeat" / "report.json");
    const bool b = slurp(work_ / "turnpike" / "report.json") ==
                   slurp(work_ / "turnpike_repeat" / "report.json");
    return {a && b, std::string("fig1=") + (a ? "identical" : "differs") +
                        " turnpike=" + (b ? "identical" : "differs")};
  }

 private:
  fs::path work_;
  json fig1_;
  json turnpike_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gate"};
  std::string work = "acceptance_runs";
  std::vector<int> only;
  app.add_option("--work-dir", work, "directory for run artifacts");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  fs::remove_all(work);
  fs::create_directories(work);
  Gate gate{fs::path(work)};
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"scaling invariance", [&] { return gate.scaling(); }},
      {"homogeneity", [&] { return gate.homogeneity(); }},
      {"adjoint gradient", [&] { return gate.gradient(); }},
      {"l1-ball projection", [&] { return gate.projection(); }},
      {"improvement certificate", [&] { return gate.improvement(); }},
      {"temporal sparsity", [&] { return gate.sparsity(); }},
      {"E(T*) T decay", [&] { return gate.decay_in_T(); }},
      {"T* vs M", [&] { return gate.tstar_in_M(); }},
      {"turnpike", [&] { return gate.turnpike(); }},
      {"h-bound and margin", [&] { return gate.h_machinery(); }},
      {"determinism", [&] { return gate.determinism(); }},
  };
  const std::set<int> selected(only.begin(), only.end());
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-24s %s  %s\n", id, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
