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


#include "polreg/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "polreg/harness/svg.hpp"

namespace polreg::harness {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("format_double failed");
  return std::string(buf, end);
}

namespace {

std::vector<MetricValue> flatten(const RegretReport& report) {
  std::vector<MetricValue> out;
  out.push_back({"player_loss", report.player_loss});
  if (report.standard) out.push_back({"standard_regret", report.standard->value});
  if (report.policy) out.push_back({"policy_regret", report.policy->value});
  for (const auto& s : report.switching) {
    out.push_back({"switching_regret_s" + std::to_string(s.switches), s.value});
  }
  for (const auto& p : report.phi) {
    out.push_back({"phi_regret_" + to_string(p.kind), p.phi_regret});
    out.push_back({"policy_phi_regret_" + to_string(p.kind), p.policy_phi_regret});
  }
  return out;
}

// Switching-bound rows are named switching_regret_s<s>; plain policy regret
// is the s = 0 case.
std::optional<std::size_t> switches_of(const std::string& metric) {
  if (metric == "policy_regret") return 0;
  const std::string prefix = "switching_regret_s";
  if (metric.rfind(prefix, 0) == 0) {
    return static_cast<std::size_t>(std::stoull(metric.substr(prefix.size())));
  }
  return std::nullopt;
}

std::string run_length(const History& seq) {
  std::string out;
  std::size_t i = 0;
  while (i < seq.size()) {
    std::size_t j = i;
    while (j < seq.size() && seq[j] == seq[i]) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(seq[i].index) + "x" + std::to_string(j - i);
    i = j;
  }
  return out;
}

json map_json(const ActionMap& map) {
  json arr = json::array();
  for (Action a : map) arr.push_back(a.index);
  return arr;
}

}  // namespace

ExperimentResult execute(const ExperimentConfig& config, std::size_t jobs) {
  struct Horizon {
    std::size_t T;
    std::size_t tau;
    OraclePtr oracle;
  };
  std::vector<Horizon> horizons;
  for (std::size_t T : config.horizons) {
    horizons.push_back({T, resolve_tau(config, T), build_oracle(config.oracle, T)});
  }

  ExperimentResult result;
  result.name = config.name;
  const std::size_t total = horizons.size() * config.runs;
  result.runs.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const auto& h = horizons[task / config.runs];
      const std::size_t run = task % config.runs;
      try {
        RunRecord rec;
        rec.run = run;
        rec.seed = config.base_seed + run;
        rec.T = h.T;
        rec.tau = h.tau;
        auto learner = build_learner(config, h.T);
        const auto transcript = run_game(*learner, *h.oracle, h.T, rec.seed);
        rec.report = compute_report(*h.oracle, transcript, config.metrics);
        rec.values = flatten(rec.report);
        result.runs[task] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(total, 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::set<std::pair<std::size_t, std::string>> seen;
  for (const auto& rec : result.runs) {
    for (const auto& [metric, reason] : rec.report.skipped) {
      if (seen.emplace(rec.T, metric).second) {
        result.skipped.push_back({rec.T, metric, reason});
      }
    }
  }

  result.summary = aggregate(result.runs);

  if (config.bound) {
    const std::size_t k = arm_count(config.oracle);
    std::optional<std::size_t> m = config.bound->m;
    if (!m && horizons.front().oracle->memory().bounded()) {
      m = horizons.front().oracle->memory().value();
    }
    if (m) {
      for (const auto& h : horizons) {
        const auto rate = resolve_rate(*config.bound, k, h.T);
        std::vector<SummaryRow> at_T;
        for (auto& row : result.summary) {
          if (row.T != h.T) continue;
          if (const auto s = switches_of(row.metric)) {
            row.bound = policy_regret_bound(*rate, row.tau, row.T, *m, *s);
            at_T.push_back(row);
          }
        }
        std::set<std::size_t> switch_counts;
        for (const auto& row : at_T) switch_counts.insert(*switches_of(row.metric));
        for (std::size_t s : switch_counts) {
          for (auto& check : compare_to_bound(at_T, *rate, *m, s)) {
            result.bound_checks.push_back(check);
          }
        }
      }
    }
  }
  return result;
}

std::vector<SummaryRow> aggregate(const std::vector<RunRecord>& runs) {
  std::map<std::pair<std::size_t, std::string>, std::size_t> slot;
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> samples;
  for (const auto& rec : runs) {
    for (const auto& mv : rec.values) {
      auto [it, inserted] = slot.try_emplace({rec.T, mv.metric}, rows.size());
      if (inserted) {
        SummaryRow row;
        row.T = rec.T;
        row.tau = rec.tau;
        row.metric = mv.metric;
        rows.push_back(row);
        samples.emplace_back();
      }
      samples[it->second].push_back(mv.value);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& xs = samples[i];
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    rows[i].n = xs.size();
    rows[i].mean = mean;
    rows[i].sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    rows[i].stderr_ = rows[i].sd / std::sqrt(n);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) { return a.T < b.T; });
  return rows;
}

std::vector<BoundCheck> compare_to_bound(const std::vector<SummaryRow>& summary,
                                         const RegretRate& rate, std::size_t m,
                                         std::size_t s) {
  const std::string metric =
      s == 0 ? std::string("policy_regret")
             : "switching_regret_s" + std::to_string(s);
  std::vector<BoundCheck> out;
  for (const auto& row : summary) {
    if (row.metric != metric) continue;
    BoundCheck check;
    check.T = row.T;
    check.tau = row.tau;
    check.mean = row.mean;
    check.stderr_ = row.stderr_;
    check.bound = policy_regret_bound(rate, row.tau, row.T, m, s);
    check.pass = row.mean + 3.0 * row.stderr_ <= check.bound;
    out.push_back(check);
  }
  return out;
}

// -- Serialization ------------------------------------------------------------

std::string runs_csv(const ExperimentResult& result) {
  std::string out = "run,seed,T,tau,metric,value\n";
  for (const auto& rec : result.runs) {
    for (const auto& mv : rec.values) {
      out += std::to_string(rec.run) + ',' + std::to_string(rec.seed) + ',' +
             std::to_string(rec.T) + ',' + std::to_string(rec.tau) + ',' +
             mv.metric + ',' + format_double(mv.value) + '\n';
    }
  }
  return out;
}

json summary_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const auto& r : result.summary) {
    rows.push_back({{"T", r.T},
                    {"tau", r.tau},
                    {"metric", r.metric},
                    {"mean", r.mean},
                    {"sd", r.sd},
                    {"stderr", r.stderr_},
                    {"n", r.n},
                    {"bound", r.bound ? json(*r.bound) : json(nullptr)}});
  }
  json skipped = json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"T", s.T}, {"metric", s.metric}, {"reason", s.reason}});
  }
  json checks = json::array();
  for (const auto& c : result.bound_checks) {
    checks.push_back({{"T", c.T},
                      {"tau", c.tau},
                      {"mean", c.mean},
                      {"stderr", c.stderr_},
                      {"bound", c.bound},
                      {"pass", c.pass}});
  }
  return {{"name", result.name},
          {"rows", rows},
          {"skipped", skipped},
          {"bound_checks", checks}};
}

json report_json(const RegretReport& report) {
  json out;
  out["T"] = report.horizon;
  out["player_loss"] = report.player_loss;
  if (report.standard) {
    out["standard_regret"] = report.standard->value;
    out["standard_regret_arm"] = report.standard->arm.index;
  }
  if (report.policy) {
    out["policy_regret"] = report.policy->value;
    out["best_constant"] = report.policy->arm.index;
  }
  for (const auto& s : report.switching) {
    const std::string suffix = "_s" + std::to_string(s.switches);
    out["switching_regret" + suffix] = s.value;
    out["switching_competitor_loss" + suffix] = s.competitor_loss;
    out["switching_sequence" + suffix] = run_length(s.sequence);
  }
  for (const auto& p : report.phi) {
    const std::string suffix = "_" + to_string(p.kind);
    out["phi_regret" + suffix] = p.phi_regret;
    out["phi_map" + suffix] = map_json(p.phi_map);
    out["policy_phi_regret" + suffix] = p.policy_phi_regret;
    out["policy_phi_map" + suffix] = map_json(p.policy_phi_map);
  }
  for (const auto& [metric, reason] : report.skipped) {
    out["skipped_" + metric] = reason;
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result,
                                                 const OutputOptions& options) {
  std::filesystem::create_directories(options.dir);
  std::vector<std::filesystem::path> written;

  const auto csv_path = options.dir / "runs.csv";
  write_file(csv_path, runs_csv(result));
  written.push_back(csv_path);

  const auto summary_path = options.dir / "summary.json";
  write_file(summary_path, summary_json(result).dump(2) + "\n");
  written.push_back(summary_path);

  if (options.reports) {
    std::string lines;
    for (const auto& rec : result.runs) {
      json line = report_json(rec.report);
      line["run"] = rec.run;
      line["seed"] = rec.seed;
      line["tau"] = rec.tau;
      lines += line.dump() + "\n";
    }
    const auto path = options.dir / "reports.jsonl";
    write_file(path, lines);
    written.push_back(path);
  }

  if (options.plots) {
    std::vector<std::string> metrics;
    for (const auto& row : result.summary) {
      if (std::find(metrics.begin(), metrics.end(), row.metric) == metrics.end()) {
        metrics.push_back(row.metric);
      }
    }
    for (const auto& metric : metrics) {
      PlotSeries mean{metric + " (mean +/- stderr)", {}, {}, {}, false};
      PlotSeries bound{"bound", {}, {}, {}, true};
      bool positive = true;
      for (const auto& row : result.summary) {
        if (row.metric != metric) continue;
        mean.x.push_back(static_cast<double>(row.T));
        mean.y.push_back(row.mean);
        mean.err.push_back(row.stderr_);
        positive = positive && row.mean > 0.0;
        if (row.bound) {
          bound.x.push_back(static_cast<double>(row.T));
          bound.y.push_back(*row.bound);
        }
      }
      std::vector<PlotSeries> series{mean};
      if (!bound.x.empty()) series.push_back(bound);
      PlotSpec spec;
      spec.title = result.name + ": " + metric;
      spec.x_label = "T";
      spec.y_label = metric;
      spec.log_x = true;
      spec.log_y = positive;
      const auto path = options.dir / ("plot_" + metric + ".svg");
      write_file(path, render_svg(spec, series));
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace polreg::harness
