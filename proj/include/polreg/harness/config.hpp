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
#include <variant>
#include <vector>

#include "json.hpp"
#include "polreg/adversaries.hpp"
#include "polreg/core.hpp"
#include "polreg/learners.hpp"
#include "polreg/metrics.hpp"
#include "polreg/minibatch.hpp"

namespace polreg::harness {

// Config errors carry the JSON path of the offending field, e.g.
// "oracle.base.random.arms: expected a positive integer".
class ConfigError : public InvalidConfiguration {
 public:
  ConfigError(const std::string& path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct TableSpec {
  // Exactly one source.
  std::optional<ObliviousTable> values;
  std::optional<std::filesystem::path> csv;
  struct Random {
    std::size_t arms = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> rows;
  };
  std::optional<Random> random;
};

// A value or "tuned" (derived from the horizon the learner will face).
using Tunable = std::optional<double>;

struct OracleSpec {
  enum class Kind { kOblivious, kSwitchingCost, kTheorem1, kExp3Mimic, kRandomMemory };
  Kind kind = Kind::kOblivious;
  TableSpec table;
  double cost = 0.0;
  std::size_t arms = 0;
  std::uint32_t target = 0;
  Tunable gamma;
  Exp3Estimator estimator = Exp3Estimator::kGain;
  std::size_t memory = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> horizon;
};

struct LearnerSpec {
  enum class Kind { kExp3, kExp3S, kFixed, kUniform };
  Kind kind = Kind::kUniform;
  Tunable gamma;
  Tunable alpha;
  std::size_t switches = 1;
  Exp3Estimator estimator = Exp3Estimator::kGain;
  std::uint32_t action = 0;
};

struct WrapperSpec {
  enum class Kind { kNone, kPlain, kKnownM, kAuto };
  enum class Formula { kExp3, kExp3S, kGeneral };
  Kind kind = Kind::kNone;
  std::size_t tau = 1;
  std::size_t m = 0;
  Formula formula = Formula::kExp3;
  std::size_t switches = 1;
  double C = 1.0;
  double q = 0.5;
};

struct BoundSpec {
  enum class Rate { kExp3, kExp3S, kExplicit };
  Rate rate = Rate::kExp3;
  double C = 1.0;
  double q = 0.5;
  std::size_t switches = 1;
  // Defaults to the oracle's declared memory when that is finite.
  std::optional<std::size_t> m;
};

struct ExperimentConfig {
  std::string name = "experiment";
  OracleSpec oracle;
  LearnerSpec learner;
  WrapperSpec wrapper;
  std::vector<std::size_t> horizons;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  ReportOptions metrics;
  std::optional<BoundSpec> bound;
  bool write_reports = false;
  std::optional<std::filesystem::path> output;
};

ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// -- Construction for one horizon ---------------------------------------------

std::size_t arm_count(const OracleSpec& spec);
OraclePtr build_oracle(const OracleSpec& spec, std::size_t T);
// Batch size the wrapper uses at horizon T (1 when unwrapped).
std::size_t resolve_tau(const ExperimentConfig& config, std::size_t T);
// Fresh learner (wrapped if configured) for horizon T.
std::unique_ptr<Learner> build_learner(const ExperimentConfig& config,
                                       std::size_t T);
std::optional<RegretRate> resolve_rate(const BoundSpec& spec, std::size_t k,
                                       std::size_t T);

}  // namespace polreg::harness
