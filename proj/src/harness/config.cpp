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


#include "polreg/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>

namespace polreg::harness {

using nlohmann::json;

ConfigError::ConfigError(const std::string& path, const std::string& what)
    : InvalidConfiguration((path.empty() ? std::string("<root>") : path) +
                           ": " + what),
      path_(path) {}

namespace {

// A JSON node together with its path in the document.
class Node {
 public:
  Node(const json& value, std::string path)
      : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError(path_, what);
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    for (const auto& [key, _] : value_.items()) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        Node(value_[key], child_path(key)).fail("unknown field");
      }
    }
  }

  bool has(const char* key) const {
    return value_.is_object() && value_.contains(key);
  }

  Node at(const char* key) const {
    if (!has(key)) Node(value_, child_path(key)).fail("required field missing");
    return Node(value_.at(key), child_path(key));
  }

  Node index(std::size_t i) const {
    return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::uint64_t as_uint() const {
    if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
    if (value_.is_number_integer() && value_.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(value_.get<std::int64_t>());
    }
    fail("expected a non-negative integer");
  }

  std::size_t as_positive() const {
    const auto v = as_uint();
    if (v == 0) fail("expected a positive integer");
    return static_cast<std::size_t>(v);
  }

  double as_double() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::string as_string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  bool as_bool() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  // A number, or the string "tuned".
  Tunable as_tunable() const {
    if (value_.is_string()) {
      if (value_.get<std::string>() == "tuned") return std::nullopt;
      fail("expected a number or \"tuned\"");
    }
    return as_double();
  }

  std::size_t size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

 private:
  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& value_;
  std::string path_;
};

// Rethrows library validation errors with the field path attached.
template <typename F>
auto at_path(const Node& node, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidConfiguration& e) {
    node.fail(e.what());
  }
}

TableSpec parse_table(const Node& node, const std::filesystem::path& base_dir) {
  node.expect_object({"values", "csv", "random"});
  TableSpec spec;
  int sources = 0;
  if (node.has("values")) {
    ++sources;
    const Node values = node.at("values");
    const std::size_t rows = values.size();
    if (rows == 0) values.fail("table needs at least one row");
    std::vector<double> flat;
    std::size_t k = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const Node row = values.index(r);
      const std::size_t cols = row.size();
      if (r == 0) k = cols;
      if (cols != k || cols == 0) row.fail("ragged or empty row");
      for (std::size_t c = 0; c < cols; ++c) {
        flat.push_back(row.index(c).as_double());
      }
    }
    spec.values = at_path(values, [&] {
      return ObliviousTable(rows, k, std::move(flat));
    });
  }
  if (node.has("csv")) {
    ++sources;
    std::filesystem::path p = node.at("csv").as_string();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    spec.csv = p;
  }
  if (node.has("random")) {
    ++sources;
    const Node r = node.at("random");
    r.expect_object({"arms", "seed", "rows"});
    TableSpec::Random random;
    random.arms = r.at("arms").as_positive();
    random.seed = r.at("seed").as_uint();
    if (r.has("rows")) random.rows = r.at("rows").as_positive();
    spec.random = random;
  }
  if (sources != 1) node.fail("give exactly one of values, csv, random");
  return spec;
}

OracleSpec parse_oracle(const Node& node, const std::filesystem::path& base_dir) {
  const std::string kind = node.at("kind").as_string();
  OracleSpec spec;
  if (kind == "oblivious") {
    node.expect_object({"kind", "table"});
    spec.kind = OracleSpec::Kind::kOblivious;
    spec.table = parse_table(node.at("table"), base_dir);
  } else if (kind == "switching_cost") {
    node.expect_object({"kind", "base", "cost"});
    spec.kind = OracleSpec::Kind::kSwitchingCost;
    spec.table = parse_table(node.at("base"), base_dir);
    spec.cost = node.at("cost").as_double();
    if (spec.cost < 0.0 || spec.cost > 1.0) {
      node.at("cost").fail("cost must lie in [0,1]");
    }
  } else if (kind == "theorem1") {
    node.expect_object({"kind", "arms", "target"});
    spec.kind = OracleSpec::Kind::kTheorem1;
    spec.arms = node.at("arms").as_positive();
    spec.target = static_cast<std::uint32_t>(node.at("target").as_uint());
    if (spec.target >= spec.arms) node.at("target").fail("target arm out of range");
  } else if (kind == "exp3_mimic") {
    node.expect_object({"kind", "arms", "gamma", "estimator"});
    spec.kind = OracleSpec::Kind::kExp3Mimic;
    spec.arms = node.at("arms").as_positive();
    spec.gamma = node.has("gamma") ? node.at("gamma").as_tunable() : std::nullopt;
    if (node.has("estimator")) {
      const Node e = node.at("estimator");
      spec.estimator = at_path(e, [&] { return parse_exp3_estimator(e.as_string()); });
    }
  } else if (kind == "random_memory") {
    node.expect_object({"kind", "arms", "memory", "seed", "horizon"});
    spec.kind = OracleSpec::Kind::kRandomMemory;
    spec.arms = node.at("arms").as_positive();
    spec.memory = node.at("memory").as_uint();
    spec.seed = node.at("seed").as_uint();
    if (node.has("horizon")) spec.horizon = node.at("horizon").as_positive();
  } else {
    node.at("kind").fail(
        "unknown oracle kind '" + kind +
        "' (expected oblivious|switching_cost|theorem1|exp3_mimic|random_memory)");
  }
  return spec;
}

LearnerSpec parse_learner(const Node& node) {
  const std::string kind = node.at("kind").as_string();
  LearnerSpec spec;
  if (kind == "exp3") {
    node.expect_object({"kind", "gamma", "estimator"});
    spec.kind = LearnerSpec::Kind::kExp3;
    spec.gamma = node.has("gamma") ? node.at("gamma").as_tunable() : std::nullopt;
    if (node.has("estimator")) {
      const Node e = node.at("estimator");
      spec.estimator = at_path(e, [&] { return parse_exp3_estimator(e.as_string()); });
    }
  } else if (kind == "exp3s") {
    node.expect_object({"kind", "gamma", "alpha", "switches"});
    spec.kind = LearnerSpec::Kind::kExp3S;
    spec.gamma = node.has("gamma") ? node.at("gamma").as_tunable() : std::nullopt;
    spec.alpha = node.has("alpha") ? node.at("alpha").as_tunable() : std::nullopt;
    if (node.has("switches")) spec.switches = node.at("switches").as_positive();
  } else if (kind == "fixed") {
    node.expect_object({"kind", "action"});
    spec.kind = LearnerSpec::Kind::kFixed;
    spec.action = static_cast<std::uint32_t>(node.at("action").as_uint());
  } else if (kind == "uniform") {
    node.expect_object({"kind"});
    spec.kind = LearnerSpec::Kind::kUniform;
  } else {
    node.at("kind").fail("unknown learner kind '" + kind +
                         "' (expected exp3|exp3s|fixed|uniform)");
  }
  return spec;
}

WrapperSpec::Formula parse_formula(const Node& node) {
  const std::string f = node.as_string();
  if (f == "exp3") return WrapperSpec::Formula::kExp3;
  if (f == "exp3s") return WrapperSpec::Formula::kExp3S;
  if (f == "general") return WrapperSpec::Formula::kGeneral;
  node.fail("unknown formula '" + f + "' (expected exp3|exp3s|general)");
}

WrapperSpec parse_wrapper(const Node& node) {
  const std::string kind = node.at("kind").as_string();
  WrapperSpec spec;
  if (kind == "none") {
    node.expect_object({"kind"});
  } else if (kind == "plain") {
    node.expect_object({"kind", "tau"});
    spec.kind = WrapperSpec::Kind::kPlain;
    spec.tau = node.at("tau").as_positive();
  } else if (kind == "known_m") {
    node.expect_object({"kind", "tau", "m"});
    spec.kind = WrapperSpec::Kind::kKnownM;
    spec.tau = node.at("tau").as_positive();
    spec.m = node.at("m").as_uint();
    if (spec.tau <= spec.m) node.at("tau").fail("tau must exceed m");
  } else if (kind == "auto") {
    node.expect_object({"kind", "formula", "switches", "C", "q"});
    spec.kind = WrapperSpec::Kind::kAuto;
    spec.formula = parse_formula(node.at("formula"));
    if (node.has("switches")) spec.switches = node.at("switches").as_positive();
    if (spec.formula == WrapperSpec::Formula::kGeneral) {
      spec.C = node.at("C").as_double();
      spec.q = node.at("q").as_double();
      at_path(node, [&] { return RegretRate(spec.C, spec.q); });
    }
  } else {
    node.at("kind").fail("unknown wrapper kind '" + kind +
                         "' (expected none|plain|known_m|auto)");
  }
  return spec;
}

BoundSpec parse_bound(const Node& node) {
  node.expect_object({"rate", "C", "q", "switches", "m"});
  BoundSpec spec;
  const std::string rate = node.at("rate").as_string();
  if (rate == "exp3") {
    spec.rate = BoundSpec::Rate::kExp3;
  } else if (rate == "exp3s") {
    spec.rate = BoundSpec::Rate::kExp3S;
  } else if (rate == "explicit") {
    spec.rate = BoundSpec::Rate::kExplicit;
    spec.C = node.at("C").as_double();
    spec.q = node.at("q").as_double();
    at_path(node, [&] { return RegretRate(spec.C, spec.q); });
  } else {
    node.at("rate").fail("unknown rate '" + rate +
                         "' (expected exp3|exp3s|explicit)");
  }
  if (node.has("switches")) spec.switches = node.at("switches").as_positive();
  if (node.has("m")) spec.m = node.at("m").as_uint();
  return spec;
}

ReportOptions parse_metrics(const Node& node) {
  node.expect_object({"standard", "policy", "switching", "phi", "swap_budget",
                      "switching_budget"});
  ReportOptions opts;
  if (node.has("standard")) opts.standard = node.at("standard").as_bool();
  if (node.has("policy")) opts.policy = node.at("policy").as_bool();
  if (node.has("switching")) {
    const Node list = node.at("switching");
    for (std::size_t i = 0; i < list.size(); ++i) {
      opts.switches.push_back(list.index(i).as_uint());
    }
  }
  if (node.has("phi")) {
    const Node list = node.at("phi");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Node item = list.index(i);
      opts.phi_kinds.push_back(
          at_path(item, [&] { return parse_transform_kind(item.as_string()); }));
    }
  }
  if (node.has("swap_budget")) opts.swap_budget = node.at("swap_budget").as_positive();
  if (node.has("switching_budget")) {
    opts.switching_budget = node.at("switching_budget").as_positive();
  }
  return opts;
}

}  // namespace

ExperimentConfig parse_config(const json& doc,
                              const std::filesystem::path& base_dir) {
  const Node root(doc, "");
  root.expect_object({"name", "oracle", "learner", "wrapper", "horizons",
                      "seeds", "metrics", "bound", "reports", "output"});
  ExperimentConfig config;
  if (root.has("name")) config.name = root.at("name").as_string();
  config.oracle = parse_oracle(root.at("oracle"), base_dir);
  config.learner = parse_learner(root.at("learner"));
  if (root.has("wrapper")) config.wrapper = parse_wrapper(root.at("wrapper"));

  const Node horizons = root.at("horizons");
  if (horizons.size() == 0) horizons.fail("need at least one horizon");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const std::size_t T = horizons.index(i).as_positive();
    if (!config.horizons.empty() && T <= config.horizons.back()) {
      horizons.index(i).fail("horizons must be strictly increasing");
    }
    config.horizons.push_back(T);
  }

  const Node seeds = root.at("seeds");
  seeds.expect_object({"count", "base"});
  config.runs = seeds.at("count").as_positive();
  if (seeds.has("base")) config.base_seed = seeds.at("base").as_uint();

  if (root.has("metrics")) config.metrics = parse_metrics(root.at("metrics"));
  if (root.has("bound")) config.bound = parse_bound(root.at("bound"));
  if (root.has("reports")) config.write_reports = root.at("reports").as_bool();
  if (root.has("output")) {
    std::filesystem::path out = root.at("output").as_string();
    if (out.is_relative() && !base_dir.empty()) out = base_dir / out;
    config.output = out;
  }

  if (config.learner.kind == LearnerSpec::Kind::kFixed &&
      config.learner.action >= arm_count(config.oracle)) {
    root.at("learner").at("action").fail("arm out of range for the oracle");
  }
  if (config.wrapper.kind == WrapperSpec::Kind::kPlain ||
      config.wrapper.kind == WrapperSpec::Kind::kKnownM) {
    if (config.wrapper.tau > config.horizons.front()) {
      root.at("wrapper").at("tau").fail("tau exceeds the smallest horizon");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc, path.parent_path());
}

// -- Construction -------------------------------------------------------------

namespace {

ObliviousTable build_table(const TableSpec& spec, std::size_t T) {
  if (spec.values) return *spec.values;
  if (spec.csv) return ObliviousTable::load_csv(*spec.csv);
  const auto& r = *spec.random;
  return ObliviousTable::random(r.rows.value_or(T), r.arms, r.seed);
}

std::size_t table_arms(const TableSpec& spec) {
  if (spec.values) return spec.values->arm_count();
  if (spec.random) return spec.random->arms;
  return ObliviousTable::load_csv(*spec.csv).arm_count();
}

}  // namespace

std::size_t arm_count(const OracleSpec& spec) {
  switch (spec.kind) {
    case OracleSpec::Kind::kOblivious:
    case OracleSpec::Kind::kSwitchingCost:
      return table_arms(spec.table);
    default:
      return spec.arms;
  }
}

OraclePtr build_oracle(const OracleSpec& spec, std::size_t T) {
  switch (spec.kind) {
    case OracleSpec::Kind::kOblivious:
      return make_oblivious(build_table(spec.table, T));
    case OracleSpec::Kind::kSwitchingCost:
      return make_switching_cost(build_table(spec.table, T), spec.cost);
    case OracleSpec::Kind::kTheorem1:
      return make_theorem1(Action{spec.target}, spec.arms);
    case OracleSpec::Kind::kExp3Mimic:
      return make_exp3_mimic(spec.arms,
                             spec.gamma.value_or(exp3_tuned_gamma(spec.arms, T)),
                             spec.estimator);
    case OracleSpec::Kind::kRandomMemory:
      return make_random_memory_bounded(spec.memory, spec.arms,
                                        spec.horizon.value_or(T), spec.seed);
  }
  throw InvalidConfiguration("unknown oracle kind");
}

std::size_t resolve_tau(const ExperimentConfig& config, std::size_t T) {
  const auto& w = config.wrapper;
  const std::size_t k = arm_count(config.oracle);
  switch (w.kind) {
    case WrapperSpec::Kind::kNone:
      return 1;
    case WrapperSpec::Kind::kPlain:
    case WrapperSpec::Kind::kKnownM:
      return w.tau;
    case WrapperSpec::Kind::kAuto:
      switch (w.formula) {
        case WrapperSpec::Formula::kExp3:
          return batch_size_exp3(k, T);
        case WrapperSpec::Formula::kExp3S:
          return batch_size_exp3s(k, w.switches, T);
        case WrapperSpec::Formula::kGeneral:
          return batch_size_general(RegretRate(w.C, w.q), T);
      }
  }
  throw InvalidConfiguration("unknown wrapper kind");
}

std::unique_ptr<Learner> build_learner(const ExperimentConfig& config,
                                       std::size_t T) {
  const std::size_t k = arm_count(config.oracle);
  const std::size_t tau = resolve_tau(config, T);
  // Rounds the inner learner experiences.
  const std::size_t J = std::max<std::size_t>(1, T / tau);
  const auto& spec = config.learner;

  std::unique_ptr<Learner> inner;
  switch (spec.kind) {
    case LearnerSpec::Kind::kExp3:
      inner = std::make_unique<Exp3Learner>(
          k, spec.gamma.value_or(exp3_tuned_gamma(k, J)), spec.estimator);
      break;
    case LearnerSpec::Kind::kExp3S:
      inner = std::make_unique<Exp3SLearner>(
          k, spec.gamma.value_or(exp3s_tuned_gamma(k, spec.switches, J)),
          spec.alpha.value_or(exp3s_default_alpha(J)));
      break;
    case LearnerSpec::Kind::kFixed:
      inner = std::make_unique<FixedAction>(k, Action{spec.action});
      break;
    case LearnerSpec::Kind::kUniform:
      inner = std::make_unique<UniformRandom>(k);
      break;
  }

  switch (config.wrapper.kind) {
    case WrapperSpec::Kind::kNone:
      return inner;
    case WrapperSpec::Kind::kKnownM:
      return wrap_known_m(std::move(inner), tau, config.wrapper.m);
    case WrapperSpec::Kind::kPlain:
    case WrapperSpec::Kind::kAuto:
      return wrap(std::move(inner), tau);
  }
  throw InvalidConfiguration("unknown wrapper kind");
}

std::optional<RegretRate> resolve_rate(const BoundSpec& spec, std::size_t k,
                                       std::size_t T) {
  switch (spec.rate) {
    case BoundSpec::Rate::kExp3:
      return exp3_rate(k);
    case BoundSpec::Rate::kExp3S:
      return exp3s_rate(k, spec.switches, T);
    case BoundSpec::Rate::kExplicit:
      return RegretRate(spec.C, spec.q);
  }
  return std::nullopt;
}

}  // namespace polreg::harness
