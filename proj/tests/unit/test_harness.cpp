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


#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "polreg/harness/config.hpp"
#include "polreg/harness/experiment.hpp"
#include "polreg/harness/svg.hpp"
#include "support/testing.hpp"

namespace polreg::harness {
namespace {

using nlohmann::json;

json base_config() {
  return json::parse(R"({
    "name": "smoke",
    "oracle": {"kind": "switching_cost",
               "base": {"random": {"arms": 2, "seed": 3}},
               "cost": 0.5},
    "learner": {"kind": "exp3"},
    "wrapper": {"kind": "auto", "formula": "exp3"},
    "horizons": [200, 800],
    "seeds": {"count": 6, "base": 100},
    "metrics": {"switching": [1], "phi": ["internal", "swap"]},
    "bound": {"rate": "exp3"}
  })");
}

std::string config_error_path(const json& doc) {
  try {
    parse_config(doc, ".");
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("polreg_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST_CASE("config parses") {
  const auto c = parse_config(base_config(), ".");
  CHECK(c.name == "smoke");
  CHECK(c.oracle.kind == OracleSpec::Kind::kSwitchingCost);
  CHECK(c.oracle.cost == 0.5);
  CHECK(c.learner.kind == LearnerSpec::Kind::kExp3);
  CHECK_FALSE(c.learner.gamma);
  CHECK(c.wrapper.kind == WrapperSpec::Kind::kAuto);
  CHECK(c.horizons == std::vector<std::size_t>{200, 800});
  CHECK(c.runs == 6);
  CHECK(c.base_seed == 100);
  CHECK(c.metrics.switches == std::vector<std::size_t>{1});
  CHECK(c.metrics.phi_kinds.size() == 2);
  REQUIRE(c.bound);
  CHECK(arm_count(c.oracle) == 2);
}

TEST_CASE("config errors carry the field path") {
  auto doc = base_config();
  doc["oracle"]["base"]["random"]["arms"] = 0;
  CHECK(config_error_path(doc) == "oracle.base.random.arms");

  doc = base_config();
  doc["horizons"] = {800, 200};
  CHECK(config_error_path(doc) == "horizons[1]");

  doc = base_config();
  doc["seeds"]["count"] = 0;
  CHECK(config_error_path(doc) == "seeds.count");

  doc = base_config();
  doc["learner"]["colour"] = "blue";
  CHECK(config_error_path(doc) == "learner.colour");

  doc = base_config();
  doc["oracle"]["kind"] = "psychic";
  CHECK(config_error_path(doc) == "oracle.kind");

  doc = base_config();
  doc["metrics"]["phi"] = {"internal", "sideways"};
  CHECK(config_error_path(doc) == "metrics.phi[1]");

  doc = base_config();
  doc["wrapper"] = json{{"kind", "known_m"}, {"tau", 2}, {"m", 2}};
  CHECK(config_error_path(doc) == "wrapper.tau");

  doc = base_config();
  doc.erase("horizons");
  CHECK(config_error_path(doc) == "horizons");

  doc = base_config();
  doc["oracle"]["cost"] = "high";
  CHECK(config_error_path(doc) == "oracle.cost");
}

TEST_CASE("load_config reports bad files") {
  CHECK_THROWS_AS(load_config("/nonexistent/polreg.json"), ConfigError);
  const auto dir = scratch_dir("badjson");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "c.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv tables resolve against the config directory") {
  const auto dir = scratch_dir("csv");
  std::filesystem::create_directories(dir / "data");
  std::ofstream(dir / "data" / "t.csv") << "0.1,0.9\n0.2,0.8\n0.3,0.7\n";
  auto doc = json::parse(R"({
    "oracle": {"kind": "oblivious", "table": {"csv": "data/t.csv"}},
    "learner": {"kind": "fixed", "action": 1},
    "horizons": [3], "seeds": {"count": 1}
  })");
  std::ofstream(dir / "c.json") << doc.dump();
  const auto c = load_config(dir / "c.json");
  const auto r = execute(c);
  REQUIRE(r.runs.size() == 1);
  CHECK(r.runs[0].report.player_loss == doctest::Approx(2.4));
  std::filesystem::remove_all(dir);
}

TEST_CASE("auto batch size") {
  auto doc = base_config();
  doc["horizons"] = {1000000};
  CHECK(resolve_tau(parse_config(doc, "."), 1000000) == 47);
  doc["wrapper"] = json{{"kind", "plain"}, {"tau", 9}};
  CHECK(resolve_tau(parse_config(doc, "."), 1000000) == 9);
  doc["wrapper"] = json{{"kind", "none"}};
  CHECK(resolve_tau(parse_config(doc, "."), 1000000) == 1);
}

TEST_CASE("execute, aggregate and serialize") {
  const auto config = parse_config(base_config(), ".");
  const auto result = execute(config, 1);
  REQUIRE(result.runs.size() == 12);
  CHECK(result.runs[0].T == 200);
  CHECK(result.runs[6].T == 800);
  CHECK(result.runs[3].seed == 103);
  CHECK(result.runs[6].seed == 100);

  SUBCASE("results do not depend on the worker count") {
    const auto parallel = execute(config, 3);
    CHECK(runs_csv(parallel) == runs_csv(result));
    CHECK(summary_json(parallel) == summary_json(result));
  }

  SUBCASE("summary means match the per-run rows") {
    std::map<std::pair<std::size_t, std::string>, std::vector<double>> by_key;
    std::istringstream csv(runs_csv(result));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "run,seed,T,tau,metric,value");
    while (std::getline(csv, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) f.push_back(cell);
      REQUIRE(f.size() == 6);
      by_key[{std::stoul(f[2]), f[4]}].push_back(std::stod(f[5]));
    }
    CHECK(by_key.size() == result.summary.size());
    for (const auto& row : result.summary) {
      const auto st = testing::stats_of(by_key.at({row.T, row.metric}));
      CHECK(row.mean == doctest::Approx(st.mean).epsilon(1e-12));
      CHECK(row.sd == doctest::Approx(st.sd).epsilon(1e-9));
      CHECK(row.n == 6);
      CHECK(std::abs(row.mean) <= static_cast<double>(row.T));
    }
  }

  SUBCASE("bounds attach to policy and switching rows") {
    int with_bound = 0;
    for (const auto& row : result.summary) {
      if (row.metric == "policy_regret" || row.metric == "switching_regret_s1") {
        REQUIRE(row.bound);
        ++with_bound;
      } else {
        CHECK_FALSE(row.bound);
      }
    }
    CHECK(with_bound == 4);
    CHECK(result.bound_checks.size() == 4);
  }
}

TEST_CASE("unsupported metrics are skipped, not fatal") {
  auto doc = json::parse(R"({
    "oracle": {"kind": "theorem1", "arms": 2, "target": 0},
    "learner": {"kind": "uniform"},
    "horizons": [50], "seeds": {"count": 3},
    "metrics": {"switching": [2]}
  })");
  const auto r = execute(parse_config(doc, "."));
  REQUIRE(r.skipped.size() == 1);
  CHECK(r.skipped[0].metric == "switching_regret_s2");
  CHECK(r.skipped[0].T == 50);
  for (const auto& row : r.summary) CHECK(row.metric != "switching_regret_s2");
  CHECK(summary_json(r)["skipped"].size() == 1);
}

TEST_CASE("reactive separation through the harness") {
  auto doc = json::parse(R"({
    "oracle": {"kind": "theorem1", "arms": 2, "target": 0},
    "learner": {"kind": "uniform"},
    "horizons": [1000], "seeds": {"count": 500}
  })");
  const auto r = execute(parse_config(doc, "."));
  for (const auto& row : r.summary) {
    if (row.metric == "standard_regret") CHECK(row.mean == 0.0);
    if (row.metric == "policy_regret") {
      CHECK(std::abs(row.mean - 500.0) <= 3 * row.stderr_);
    }
  }
}

TEST_CASE("identical seed lists give identical rows") {
  auto doc = base_config();
  doc["seeds"] = {{"count", 2}, {"base", 9}};
  doc["horizons"] = {300};
  const auto a = execute(parse_config(doc, "."));
  const auto b = execute(parse_config(doc, "."));
  CHECK(runs_csv(a) == runs_csv(b));
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto dir_a = scratch_dir("out_a");
  const auto dir_b = scratch_dir("out_b");
  const auto config = parse_config(base_config(), ".");
  const auto written_a = write_outputs(execute(config, 2), {dir_a, true, true});
  const auto written_b = write_outputs(execute(config, 1), {dir_b, true, true});
  REQUIRE(written_a.size() == written_b.size());
  CHECK(std::filesystem::exists(dir_a / "runs.csv"));
  CHECK(std::filesystem::exists(dir_a / "summary.json"));
  CHECK(std::filesystem::exists(dir_a / "reports.jsonl"));
  CHECK(std::filesystem::exists(dir_a / "plot_policy_regret.svg"));
  for (std::size_t i = 0; i < written_a.size(); ++i) {
    CHECK(written_a[i].filename() == written_b[i].filename());
    CHECK(slurp(written_a[i]) == slurp(written_b[i]));
  }
  const auto summary = json::parse(slurp(dir_a / "summary.json"));
  CHECK(summary["name"] == "smoke");
  CHECK(summary["rows"].size() > 0);
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("report json") {
  const auto table = make_oblivious(ObliviousTable{{0.9, 0.1}, {0.2, 0.8}});
  const auto tr = testing::transcript_of(*table, make_history({0, 0}));
  ReportOptions opts;
  opts.switches = {1};
  opts.phi_kinds = {TransformKind::kInternal};
  const auto j = report_json(compute_report(*table, tr, opts));
  CHECK(j["T"] == 2);
  CHECK(j["player_loss"].get<double>() == doctest::Approx(1.1));
  CHECK(j["switching_regret_s1"].get<double>() == doctest::Approx(0.8));
  CHECK(j["switching_sequence_s1"] == "1x1,0x1");
  CHECK(j["phi_map_internal"] == json::array({1, 1}));
  CHECK(j["best_constant"] == 1);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3, 1e-300, 12345.678, -2.5, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(47) == "47");
}

TEST_CASE("compare_to_bound") {
  std::vector<SummaryRow> rows(2);
  rows[0] = {100, 10, "policy_regret", 10.0, 5.0, 1.0, 25, std::nullopt};
  rows[1] = {100, 10, "player_loss", 1e9, 0.0, 0.0, 25, std::nullopt};
  const RegretRate rate(1.0, 0.5);
  // bound = 10 * sqrt(10) + 0 + 10 = 41.6
  auto checks = compare_to_bound(rows, rate, 0, 0);
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].pass);
  CHECK(checks[0].bound == doctest::Approx(10 * std::sqrt(10.0) + 10));
  rows[0].mean = 40.0;
  CHECK_FALSE(compare_to_bound(rows, rate, 0, 0)[0].pass);
}

TEST_CASE("svg emitter") {
  PlotSpec spec;
  spec.title = "a < b & c";
  spec.log_x = true;
  spec.log_y = true;
  const auto svg = render_svg(spec, {{"mean", {10, 100, 1000}, {1, 5, 30}, {0.1, 0.5, 2}, false},
                                     {"bound", {10, 100}, {-1, 50}, {}, true}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  const auto empty = render_svg(PlotSpec{}, {});
  CHECK(empty.find("</svg>") != std::string::npos);
}

}  // namespace
}  // namespace polreg::harness
