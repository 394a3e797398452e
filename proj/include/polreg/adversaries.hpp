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
#include <string>
#include <vector>

#include "polreg/core.hpp"
#include "polreg/learners.hpp"

namespace polreg {

// Dense T_max x k loss matrix for oblivious adversaries; row t-1 holds f_t.
class ObliviousTable {
 public:
  ObliviousTable(std::size_t rows, std::size_t k, std::vector<double> values);
  ObliviousTable(std::initializer_list<std::initializer_list<double>> rows);

  // Uniform [0,1) entries from a seeded stream.
  static ObliviousTable random(std::size_t rows, std::size_t k,
                               std::uint64_t seed);
  // Row t holds k comma-separated losses. Blank lines are skipped.
  static ObliviousTable load_csv(const std::filesystem::path& path);
  static ObliviousTable parse_csv(const std::string& text);

  std::size_t rows() const { return rows_; }
  std::size_t arm_count() const { return k_; }
  // 1-based round; throws HorizonExceeded past the last row.
  double at(std::size_t t, Action a) const;

 private:
  std::size_t rows_;
  std::size_t k_;
  std::vector<double> values_;
};

class ObliviousOracle final : public LossOracle {
 public:
  explicit ObliviousOracle(ObliviousTable table) : table_(std::move(table)) {}

  std::size_t arm_count() const override { return table_.arm_count(); }
  MemoryBound memory() const override { return MemoryBound::of(0); }
  std::string name() const override { return "oblivious"; }
  const ObliviousTable& table() const { return table_; }

 protected:
  double do_eval(std::size_t t, std::span<const Action> h) const override;

 private:
  ObliviousTable table_;
};

// Oblivious base loss plus a friction cost whenever the action changes,
// clamped to [0,1]. 1-memory-bounded.
class SwitchingCostOracle final : public LossOracle {
 public:
  SwitchingCostOracle(ObliviousTable base, double cost);

  std::size_t arm_count() const override { return base_.arm_count(); }
  MemoryBound memory() const override { return MemoryBound::of(1); }
  std::string name() const override { return "switching_cost"; }
  double cost() const { return cost_; }

 protected:
  double do_eval(std::size_t t, std::span<const Action> h) const override;

 private:
  ObliviousTable base_;
  double cost_;
};

// Zero on round one; afterwards 1 if the first action was y, else 0. Every
// player with Pr(X_1 = y) = p expects p(T-1) while other constants pay 0.
class Theorem1Oracle final : public LossOracle {
 public:
  Theorem1Oracle(std::size_t k, Action y);

  std::size_t arm_count() const override { return k_; }
  MemoryBound memory() const override { return MemoryBound::unbounded(); }
  std::string name() const override { return "theorem1"; }
  Action target() const { return y_; }

 protected:
  double do_eval(std::size_t t, std::span<const Action> h) const override;

 private:
  std::size_t k_;
  Action y_;
};

// Simulates an EXP3 instance along the history, feeding it the loss this
// oracle assigned to each played arm, and charges f_t(j) = p_{j,t}.
//
// eval replays the simulation from scratch (O(t k)); cursor() carries the
// simulated state and costs O(k) per round. Both produce identical values.
class Exp3MimicOracle final : public LossOracle {
 public:
  Exp3MimicOracle(std::size_t k, double gamma,
                  Exp3Estimator estimator = Exp3Estimator::kGain);

  std::size_t arm_count() const override { return k_; }
  MemoryBound memory() const override { return MemoryBound::unbounded(); }
  std::string name() const override { return "exp3_mimic"; }
  std::unique_ptr<OracleCursor> cursor() const override;

  double gamma() const { return gamma_; }
  Exp3Estimator estimator() const { return estimator_; }

 protected:
  double do_eval(std::size_t t, std::span<const Action> h) const override;

 private:
  std::size_t k_;
  double gamma_;
  Exp3Estimator estimator_;
};

// f_t = hash(seed, t, last min(t, m+1) actions) mapped to [0,1). T_max is
// recorded but not enforced.
class RandomMemoryOracle final : public LossOracle {
 public:
  RandomMemoryOracle(std::size_t m, std::size_t k, std::size_t t_max,
                     std::uint64_t seed);

  std::size_t arm_count() const override { return k_; }
  MemoryBound memory() const override { return MemoryBound::of(m_); }
  std::string name() const override { return "random_memory"; }
  std::size_t declared_horizon() const { return t_max_; }

 protected:
  double do_eval(std::size_t t, std::span<const Action> h) const override;

 private:
  std::size_t m_;
  std::size_t k_;
  std::size_t t_max_;
  std::uint64_t seed_;
};

OraclePtr make_oblivious(ObliviousTable table);
OraclePtr make_switching_cost(ObliviousTable base, double cost);
OraclePtr make_theorem1(Action y, std::size_t k = 2);
OraclePtr make_exp3_mimic(std::size_t k, double gamma,
                          Exp3Estimator estimator = Exp3Estimator::kGain);
OraclePtr make_random_memory_bounded(std::size_t m, std::size_t k,
                                     std::size_t t_max,
                                     std::uint64_t adversary_seed);

}  // namespace polreg
