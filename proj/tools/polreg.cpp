// Copyright 2026 The polreg Authors.
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


// polreg: run policy-regret experiments and evaluate the batching formulas.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "polreg/harness/config.hpp"
#include "polreg/harness/experiment.hpp"
#include "polreg/minibatch.hpp"

namespace {

using polreg::harness::format_double;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::size_t jobs, bool no_plots, bool reports) {
  auto config = polreg::harness::load_config(config_path);
  std::filesystem::path dir;
  if (!out_dir.empty()) {
    dir = out_dir;
  } else if (config.output) {
    dir = *config.output;
  } else {
    dir = std::filesystem::path("out") / config.name;
  }
  const auto result = polreg::harness::execute(config, jobs);
  polreg::harness::OutputOptions options;
  options.dir = dir;
  options.plots = !no_plots;
  options.reports = reports || config.write_reports;
  for (const auto& path : polreg::harness::write_outputs(result, options)) {
    std::cout << path.string() << "\n";
  }
  for (const auto& check : result.bound_checks) {
    std::cout << "bound T=" << check.T << " tau=" << check.tau
              << " mean=" << format_double(check.mean)
              << " stderr=" << format_double(check.stderr_)
              << " bound=" << format_double(check.bound) << " "
              << (check.pass ? "ok" : "EXCEEDED") << "\n";
  }
  for (const auto& s : result.skipped) {
    std::cout << "skipped T=" << s.T << " " << s.metric << ": " << s.reason
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-regret experiments for bandit learners"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 1;
  bool no_plots = false;
  bool reports = false;
  run->add_option("config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  run->add_flag("--no-plots", no_plots, "Skip SVG plots");
  run->add_flag("--reports", reports, "Write per-run reports.jsonl");

  auto* bound = app.add_subcommand("bound", "Evaluate the batched policy-regret bound");
  double C = 0.0;
  double q = 0.5;
  std::size_t T = 0;
  std::size_t m = 1;
  std::size_t s = 0;
  std::optional<std::size_t> tau;
  bound->add_option("--C", C, "Rate constant")->required();
  bound->add_option("--q", q, "Rate exponent in (0,1)");
  bound->add_option("--T", T, "Horizon")->required();
  bound->add_option("--m", m, "Adversary memory");
  bound->add_option("--s", s, "Competitor switches");
  bound->add_option("--tau", tau, "Batch size (default: tuned)");

  auto* batch = app.add_subcommand("batch-size", "Tuned batch size");
  std::string algo = "exp3";
  std::size_t k = 2;
  batch->add_option("--algo", algo, "exp3 | exp3s | general")
      ->check(CLI::IsMember({"exp3", "exp3s", "general"}));
  batch->add_option("--k", k, "Number of arms");
  batch->add_option("--s", s, "Switches (exp3s)");
  batch->add_option("--T", T, "Horizon")->required();
  batch->add_option("--C", C, "Rate constant (general)");
  batch->add_option("--q", q, "Rate exponent (general)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, jobs, no_plots, reports);
    if (*bound) {
      const polreg::RegretRate rate(C, q);
      const std::size_t t = tau ? *tau : polreg::batch_size_general(rate, T);
      std::cout << "tau=" << t << " bound="
                << format_double(polreg::policy_regret_bound(rate, t, T, m, s))
                << " leading=" << format_double(
                       polreg::policy_regret_leading_term(rate, T, m))
                << "\n";
      return 0;
    }
    if (*batch) {
      std::size_t t = 0;
      if (algo == "exp3") {
        t = polreg::batch_size_exp3(k, T);
      } else if (algo == "exp3s") {
        t = polreg::batch_size_exp3s(k, s, T);
      } else {
        t = polreg::batch_size_general(polreg::RegretRate(C, q), T);
      }
      std::cout << t << "\n";
      return 0;
    }
  } catch (const polreg::ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
