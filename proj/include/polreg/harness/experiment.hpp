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


#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "polreg/harness/config.hpp"
#include "polreg/metrics.hpp"
#include "polreg/minibatch.hpp"

namespace polreg::harness {

struct MetricValue {
  std::string metric;
  double value = 0.0;
};

// Everything recorded for one (T, run) pair.
struct RunRecord {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  std::size_t T = 0;
  std::size_t tau = 1;
  std::vector<MetricValue> values;
  RegretReport report;
};

struct SummaryRow {
  std::size_t T = 0;
  std::size_t tau = 1;
  std::string metric;
  double mean = 0.0;
  double sd = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
  std::optional<double> bound;
};

struct SkippedMetric {
  std::size_t T = 0;
  std::string metric;
  std::string reason;
};

struct BoundCheck {
  std::size_t T = 0;
  std::size_t tau = 1;
  double mean = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::string name;
  // Ordered by (T, run).
  std::vector<RunRecord> runs;
  // Ordered by (T, metric order of first appearance).
  std::vector<SummaryRow> summary;
  std::vector<SkippedMetric> skipped;
  std::vector<BoundCheck> bound_checks;
};

// Runs every (T, seed) game, computes the requested metrics and aggregates.
// Run i uses seed base_seed + i. jobs = 0 picks the hardware concurrency.
// Results do not depend on jobs.
ExperimentResult execute(const ExperimentConfig& config, std::size_t jobs = 1);

// Mean, sample standard deviation and standard error per (T, metric).
std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& runs);

// Flags every T whose policy-regret row (s = 0) or switching_regret_s<s> row
// has mean + 3 stderr above policy_regret_bound(rate, tau, T, m, s).
std::vector<BoundCheck> compare_to_bound(const std::vector<SummaryRow>& summary,
                                         const RegretRate& rate, std::size_t m,
                                         std::size_t s);

struct OutputOptions {
  std::filesystem::path dir;
  bool plots = true;
  bool reports = false;
};

// Writes runs.csv, summary.json, and (optionally) one SVG per metric and
// reports.jsonl. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result,
                                                 const OutputOptions& options);

std::string runs_csv(const ExperimentResult& result);
nlohmann::json summary_json(const ExperimentResult& result);
// Flat object with stable keys; see README for the schema.
nlohmann::json report_json(const RegretReport& report);

// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace polreg::harness
