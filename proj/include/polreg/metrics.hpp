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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polreg/core.hpp"

namespace polreg {

// The metric cannot be computed for this oracle (e.g. exact switching
// competitors against an unbounded-memory adversary).
class UnsupportedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The exact computation would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArmValue {
  double value = 0.0;
  Action arm;
};

// Per-round losses of a deterministic action sequence played from round one.
std::vector<double> replay(const LossOracle& oracle,
                           std::span<const Action> actions);
double replay_total(const LossOracle& oracle, std::span<const Action> actions);

// max_y sum_t [ f_t(X_1..X_t) - f_t(X_1..X_{t-1}, y) ]; arm is the maximizer
// (lowest index on ties). Throws ContractViolation if the transcript's losses
// do not match the oracle.
ArmValue standard_regret(const LossOracle& oracle, const Transcript& transcript);

// player loss - min_y replay_total(y^T); arm is the best constant.
ArmValue policy_regret(const LossOracle& oracle, const Transcript& transcript);

inline constexpr std::size_t kDefaultSwitchingBudget = 20'000'000;

struct SwitchingCompetitor {
  double loss = 0.0;
  History sequence;
};

// Exact best piecewise-constant sequence with at most s switches against a
// bounded-memory oracle, by dynamic programming over (round, last max(m,1)
// actions, switches used). Ties resolve to the lexicographically smallest
// sequence. The work estimate k^max(m,1) (s+1) k T must fit in budget.
SwitchingCompetitor best_switching_competitor(
    const LossOracle& oracle, std::size_t T, std::size_t s,
    std::size_t budget = kDefaultSwitchingBudget);

double policy_regret_switching(const LossOracle& oracle,
                               const Transcript& transcript, std::size_t s,
                               std::size_t budget = kDefaultSwitchingBudget);

// -- Action transformations ---------------------------------------------------

enum class TransformKind { kConstant, kInternal, kSwap, kExplicit };

std::string to_string(TransformKind kind);
TransformKind parse_transform_kind(const std::string& s);

// phi as its image: map[x] = phi(x).
using ActionMap = std::vector<Action>;

inline constexpr std::size_t kDefaultSwapBudget = 50'000;

class TransformationSet {
 public:
  // The k maps x -> y.
  static TransformationSet constant(std::size_t k);
  // The k(k-1) maps replacing y by y' != y and fixing everything else.
  static TransformationSet internal(std::size_t k);
  // All k^k maps; throws BudgetExceeded when k^k > budget.
  static TransformationSet swap(std::size_t k,
                                std::size_t budget = kDefaultSwapBudget);
  static TransformationSet explicit_maps(std::size_t k,
                                         std::vector<ActionMap> maps);
  static TransformationSet identity(std::size_t k);
  static TransformationSet of_kind(TransformKind kind, std::size_t k,
                                   std::size_t swap_budget = kDefaultSwapBudget);

  TransformKind kind() const { return kind_; }
  std::size_t arm_count() const { return k_; }
  const std::vector<ActionMap>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }

 private:
  TransformationSet(TransformKind kind, std::size_t k,
                    std::vector<ActionMap> maps);

  TransformKind kind_;
  std::size_t k_;
  std::vector<ActionMap> maps_;
};

struct MapValue {
  double value = 0.0;
  ActionMap map;
};

// max_phi sum_t [ f_t(X_1..X_t) - f_t(X_1..X_{t-1}, phi(X_t)) ].
MapValue phi_regret(const LossOracle& oracle, const Transcript& transcript,
                    const TransformationSet& phi);

// max_phi [ player loss - replay_total(phi(X_1), ..., phi(X_T)) ].
MapValue policy_phi_regret(const LossOracle& oracle,
                           const Transcript& transcript,
                           const TransformationSet& phi);

// -- Report -------------------------------------------------------------------

struct SwitchingResult {
  std::size_t switches = 0;
  double value = 0.0;
  double competitor_loss = 0.0;
  History sequence;
};

struct PhiResult {
  TransformKind kind = TransformKind::kConstant;
  double phi_regret = 0.0;
  ActionMap phi_map;
  double policy_phi_regret = 0.0;
  ActionMap policy_phi_map;
};

struct ReportOptions {
  bool standard = true;
  bool policy = true;
  std::vector<std::size_t> switches;
  std::vector<TransformKind> phi_kinds;
  std::size_t swap_budget = kDefaultSwapBudget;
  std::size_t switching_budget = kDefaultSwitchingBudget;
};

struct RegretReport {
  std::size_t horizon = 0;
  double player_loss = 0.0;
  std::optional<ArmValue> standard;
  std::optional<ArmValue> policy;
  std::vector<SwitchingResult> switching;
  std::vector<PhiResult> phi;
  // Metrics that could not be computed, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;
};

// Computes the requested metrics. UnsupportedMetric and BudgetExceeded are
// recorded in skipped rather than thrown.
RegretReport compute_report(const LossOracle& oracle,
                            const Transcript& transcript,
                            const ReportOptions& options);

}  // namespace polreg
