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


// sparsenode: train, sweep, verify, plot and analyze L1-penalized neural ODE
// control problems.
//
//   sparsenode train configs/fig1.json --out runs/fig1
//   sparsenode sweep configs/ls1d.json --axis T=1,2,4,8 --jobs 4
//   sparsenode verify gradient
//   sparsenode plot runs/fig1
//   sparsenode analyze runs/fig1
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 a property
// suite failed.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sparsenode/error.h"
#include "sparsenode_tools/plot.h"
#include "sparsenode_tools/run_config.h"
#include "sparsenode_tools/runner.h"
#include "sparsenode_tools/suites.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparsenode;
using namespace sparsenode::tools;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;
constexpr int kSuiteFailed = 3;

struct Globals {
  std::optional<uint64_t> seed;
  std::string out;
  int jobs = 1;
};

RunConfig load_config(const std::string& path, const Globals& g,
                      std::optional<int> n_override) {
  json j = read_json_file(path);
  if (n_override) {
    if (!j.contains("dataset") || !j["dataset"].contains("n")) {
      throw InvalidInput("--n needs a generated dataset with an 'n' field");
    }
    j["dataset"]["n"] = *n_override;
  }
  if (g.seed) {
    if (!j.contains("train")) j["train"] = json::object();
    j["train"]["seed"] = *g.seed;
  }
  return parse_run_config(j, fs::path(path).parent_path());
}

void print_report(const json& r) {
  std::printf("J = %.6g (running %.6g, penalty %.6g)\n", r["J"].get<double>(),
              r["running"].get<double>(), r["penalty"].get<double>());
  std::printf("T* = %.6g (node %d%s), E(x(T*)) = %.6g\n",
              r["Tstar"].get<double>(), r["idx"].get<int>(),
              r["Tstar_at_boundary"].get<bool>() ? ", at t = 0" : "",
              r["E_at_Tstar"].get<double>());
  std::printf("saturated-or-zero steps: %.3g, zero after T*: %.3g\n",
              r["frac_bang_bang"].get<double>(),
              r["frac_zero_after"].get<double>());
  if (r.contains("margin_at_Tstar")) {
    std::printf("margin at T*: %.6g\n", r["margin_at_Tstar"].get<double>());
  }
  if (r.contains("turnpike")) {
    std::printf("max |x - xbar|^2 after T*: %.6g\n",
                r["turnpike"]["max_state_deviation_after_Tstar"].get<double>());
  }
}

int cmd_train(const std::string& config, const Globals& g,
              std::optional<int> n, const TrainOptions& opts) {
  RunConfig cfg = load_config(config, g, n);
  const fs::path dir = g.out.empty() ? fs::path(cfg.output) : fs::path(g.out);
  cfg.output = dir.string();
  const auto t0 = std::chrono::steady_clock::now();
  const json report = run_train(cfg, dir, opts);
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::fprintf(stderr, "trained %d iterations in %.1f s\n", cfg.train.iters,
               secs);
  print_report(report);
  std::printf("wrote %s\n", dir.string().c_str());
  return kOk;
}

int cmd_sweep(const std::string& config, const std::string& axis_text,
              const Globals& g, const TrainOptions& opts) {
  const RunConfig base = load_config(config, g, std::nullopt);
  const SweepAxis axis = parse_axis(axis_text);
  const fs::path dir = g.out.empty() ? fs::path(base.output + "_sweep_" + axis.name)
                                     : fs::path(g.out);
  const SweepResult res = run_sweep(base, axis, dir, g.jobs, opts);
  int failed = 0;
  std::printf("%8s %8s %12s %14s %14s\n", "T", "M", "T*", "E(x(T*))", "E*T");
  for (const SweepRow& row : res.rows) {
    if (!row.ok) {
      ++failed;
      std::printf("%s=%g failed: %s\n", axis.name.c_str(), row.value,
                  row.error.c_str());
      continue;
    }
    const RunPoint& p = row.point;
    std::printf("%8g %8g %12.6g %14.6g %14.6g\n", p.T, p.M, p.Tstar,
                p.E_at_Tstar, p.E_at_Tstar * p.T);
  }
  if (res.fitted) {
    std::printf("fitted C for T*: %.6g (slack %.3g), for E: %.6g (slack %.3g)\n",
                res.fit.tstar.C, res.fit.tstar.slack, res.fit.error.C,
                res.fit.error.slack);
    if (res.fit.varies_T) {
      std::printf("E(x(T*)) non-increasing in T: %s\n",
                  res.fit.error_nonincreasing_in_T ? "yes" : "no");
    }
    if (res.fit.varies_M) {
      std::printf("T* non-increasing in M: %s\n",
                  res.fit.tstar_nonincreasing_in_M ? "yes" : "no");
    }
  } else {
    std::printf("no bound fit (needs two or more successful runs)\n");
  }
  std::printf("wrote %s\n", dir.string().c_str());
  return failed > 0 ? kNumerical : kOk;
}

int cmd_verify(const std::string& suite, const Globals& g) {
  const uint64_t seed = g.seed.value_or(20260101);
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names = {suite};
  }
  bool all_passed = true;
  for (const std::string& name : names) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteResult r = run_suite(name, seed);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("[%s] %s: %d instances, %s (%.2f s)\n",
                r.passed ? "PASS" : "FAIL", r.name.c_str(), r.instances,
                r.detail.c_str(), secs);
    all_passed &= r.passed;
  }
  return all_passed ? kOk : kSuiteFailed;
}

int cmd_plot(const std::string& dir) {
  for (const std::string& f : plot_dir(dir)) {
    std::printf("wrote %s\n", (fs::path(dir) / f).string().c_str());
  }
  return kOk;
}

int cmd_analyze(const std::string& dir) {
  print_report(run_analyze(dir));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L1-penalized neural ODE training and analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "override the training seed "
                                                  "(verify: master seed)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "concurrent runs for sweep")
      ->check(CLI::PositiveNumber);

  std::string config, axis, dir, suite;
  std::optional<int> n;
  TrainOptions opts;

  auto* train = app.add_subcommand("train", "train one configuration");
  train->add_option("config", config, "run config (JSON)")->required();
  train->add_option("--n", n, "override the generated dataset size");
  train->add_option("--checkpoint-every", opts.checkpoint_every,
                    "write checkpoints/iter_*.json every N iterations");
  train->add_flag("--grad-norms", opts.grad_norms,
                  "write grad_norms.csv at the final iterate");

  auto* sweep = app.add_subcommand("sweep", "train over a T or M axis");
  sweep->add_option("config", config, "base run config (JSON)")->required();
  sweep->add_option("--axis", axis, "T=1,2,4,8 or M=2,4,8,16")->required();

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite,
                     "scaling, gradient, projection, improvement, homogeneity "
                     "or all")
      ->required();

  auto* plot = app.add_subcommand("plot", "write SVG plots for a run or sweep");
  plot->add_option("dir", dir, "run or sweep directory")->required();

  auto* analyze = app.add_subcommand("analyze", "recompute report.json");
  analyze->add_option("dir", dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*train) return cmd_train(config, g, n, opts);
    if (*sweep) return cmd_sweep(config, axis, g, opts);
    if (*verify) return cmd_verify(suite, g);
    if (*plot) return cmd_plot(dir);
    if (*analyze) return cmd_analyze(dir);
  } catch (const DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kInvalid;
}
