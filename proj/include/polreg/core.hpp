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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polreg/rng.hpp"

namespace polreg {

// -- Errors -------------------------------------------------------------------

// Base for every error the library raises on a broken contract. The CLI maps
// all of these to a nonzero exit code.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class OracleContractViolation : public ContractViolation {
 public:
  OracleContractViolation(std::size_t round, const std::string& what);
  std::size_t round() const { return round_; }

 private:
  std::size_t round_;
};

class HorizonExceeded : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class InvalidConfiguration : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// -- Domain types -------------------------------------------------------------

// Arm identifier in [0, k). Arms are 0-indexed.
struct Action {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(Action, Action) = default;
};

using History = std::vector<Action>;

// Builds a history from raw arm indices; mostly a test and config convenience.
History make_history(std::initializer_list<std::uint32_t> arms);
History make_history(std::span<const std::uint32_t> arms);

// Declared memory bound m of an adversary: losses depend only on the last m+1
// actions. An empty bound means the adversary may look at the whole history.
class MemoryBound {
 public:
  static MemoryBound unbounded() { return MemoryBound{}; }
  static MemoryBound of(std::size_t m) { return MemoryBound{m}; }

  bool bounded() const { return m_.has_value(); }
  // Requires bounded().
  std::size_t value() const;
  std::string to_string() const;

  friend bool operator==(const MemoryBound&, const MemoryBound&) = default;

 private:
  MemoryBound() = default;
  explicit MemoryBound(std::size_t m) : m_(m) {}
  std::optional<std::size_t> m_;
};

class LossOracle;

namespace detail {
class HistoryCursor;
}  // namespace detail

// Incremental evaluation of an oracle along a single growing trajectory.
//
// After n pushes, peek(a) returns eval(n+1, (pushed..., a)) without committing
// and push(a) commits a and returns the same value. Oracles whose eval is
// expensive from scratch override this to carry running state. A cursor
// borrows its oracle and must not outlive it.
class OracleCursor {
 public:
  virtual ~OracleCursor() = default;

  virtual double peek(Action a) = 0;
  virtual double push(Action a) = 0;
  // Number of actions committed so far.
  virtual std::size_t rounds() const = 0;
};

// An adversary: a deterministic loss f_t(x_1..x_t) in [0,1] for every round t.
//
// eval is pure. Implementations are immutable after construction and safe to
// share across threads; cursors are single-owner.
class LossOracle {
 public:
  virtual ~LossOracle() = default;

  virtual std::size_t arm_count() const = 0;
  virtual MemoryBound memory() const = 0;
  virtual std::string name() const = 0;

  // t is 1-based and history.size() must equal t. Arms the oracle may read
  // (the last m+1, or all of them when unbounded) are range-checked.
  double eval(std::size_t t, std::span<const Action> history) const;

  // Default cursor keeps the history and calls eval.
  virtual std::unique_ptr<OracleCursor> cursor() const;

 protected:
  virtual double do_eval(std::size_t t,
                         std::span<const Action> history) const = 0;

 private:
  friend class detail::HistoryCursor;
};

using OraclePtr = std::shared_ptr<const LossOracle>;

// A stateful action-choosing policy with bandit feedback.
//
// choose and feedback must strictly alternate, starting with choose. The
// public methods enforce the protocol and the [0,1] loss range; subclasses
// implement do_choose / do_feedback.
class Learner {
 public:
  explicit Learner(std::size_t arm_count);
  virtual ~Learner() = default;

  Learner(const Learner&) = delete;
  Learner& operator=(const Learner&) = delete;

  Action choose(Rng& rng);
  void feedback(double loss);

  std::size_t arm_count() const { return arm_count_; }
  virtual std::string name() const = 0;

 protected:
  virtual Action do_choose(Rng& rng) = 0;
  virtual void do_feedback(Action played, double loss) = 0;

 private:
  std::size_t arm_count_;
  std::optional<Action> pending_;
};

// The realized record of one game.
struct Transcript {
  History actions;
  std::vector<double> losses;
  std::uint64_t seed = 0;
  double total_loss = 0.0;

  std::size_t horizon() const { return actions.size(); }
};

// Plays T rounds: X_t = learner.choose(rng), loss = oracle.eval(t, X_1..X_t),
// learner.feedback(loss). The learner should be freshly constructed. The same
// (learner config, oracle, T, seed) always reproduces the same transcript.
Transcript run_game(Learner& learner, const LossOracle& oracle, std::size_t T,
                    std::uint64_t seed);

// Left-to-right sum; every loss total in the library goes through this.
double sum_losses(std::span<const double> losses);

}  // namespace polreg
