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


#include "polreg/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polreg {

OracleContractViolation::OracleContractViolation(std::size_t round,
                                                 const std::string& what)
    : ContractViolation("oracle contract violation at round " +
                        std::to_string(round) + ": " + what),
      round_(round) {}

History make_history(std::initializer_list<std::uint32_t> arms) {
  return make_history(std::span<const std::uint32_t>(arms.begin(), arms.size()));
}

History make_history(std::span<const std::uint32_t> arms) {
  History h;
  h.reserve(arms.size());
  for (auto a : arms) h.push_back(Action{a});
  return h;
}

std::size_t MemoryBound::value() const {
  if (!m_) throw ContractViolation("memory bound is unbounded");
  return *m_;
}

std::string MemoryBound::to_string() const {
  return m_ ? std::to_string(*m_) : std::string("unbounded");
}

std::size_t Rng::sample(std::span<const double> probs) {
  const double u = uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

// -- LossOracle ---------------------------------------------------------------

double LossOracle::eval(std::size_t t, std::span<const Action> history) const {
  if (t == 0) throw ContractViolation("eval: rounds are 1-based");
  if (history.size() != t) {
    throw ContractViolation("eval: history length " +
                            std::to_string(history.size()) +
                            " does not match round " + std::to_string(t));
  }
  const auto k = arm_count();
  const auto bound = memory();
  const std::size_t window =
      bound.bounded() ? std::min(t, bound.value() + 1) : t;
  for (Action a : history.subspan(t - window)) {
    if (a.index >= k) {
      throw ContractViolation("eval: arm " + std::to_string(a.index) +
                              " out of range for k=" + std::to_string(k));
    }
  }
  return do_eval(t, history);
}

namespace detail {

// Earlier arms were checked when pushed, so only the new one is.
class HistoryCursor final : public OracleCursor {
 public:
  explicit HistoryCursor(const LossOracle& oracle) : oracle_(oracle) {}

  double peek(Action a) override {
    const double loss = push(a);
    history_.pop_back();
    return loss;
  }

  double push(Action a) override {
    if (a.index >= oracle_.arm_count()) {
      throw ContractViolation("cursor: arm " + std::to_string(a.index) +
                              " out of range");
    }
    history_.push_back(a);
    try {
      return oracle_.do_eval(history_.size(), history_);
    } catch (...) {
      history_.pop_back();
      throw;
    }
  }

  std::size_t rounds() const override { return history_.size(); }

 private:
  const LossOracle& oracle_;
  History history_;
};

}  // namespace detail

std::unique_ptr<OracleCursor> LossOracle::cursor() const {
  return std::make_unique<detail::HistoryCursor>(*this);
}

// -- Learner ------------------------------------------------------------------

Learner::Learner(std::size_t arm_count) : arm_count_(arm_count) {
  if (arm_count == 0) throw InvalidConfiguration("learner needs k >= 1 arms");
}

Action Learner::choose(Rng& rng) {
  if (pending_) throw ContractViolation(name() + ": choose called twice");
  const Action a = do_choose(rng);
  if (a.index >= arm_count_) {
    throw ContractViolation(name() + ": chose arm " + std::to_string(a.index) +
                            " outside [0," + std::to_string(arm_count_) + ")");
  }
  pending_ = a;
  return a;
}

void Learner::feedback(double loss) {
  if (!pending_) throw ContractViolation(name() + ": feedback before choose");
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw ContractViolation(name() + ": loss " + std::to_string(loss) +
                            " outside [0,1]");
  }
  const Action played = *pending_;
  pending_.reset();
  do_feedback(played, loss);
}

// -- Game ---------------------------------------------------------------------

Transcript run_game(Learner& learner, const LossOracle& oracle, std::size_t T,
                    std::uint64_t seed) {
  if (T == 0) throw InvalidConfiguration("run_game: horizon must be >= 1");
  if (learner.arm_count() != oracle.arm_count()) {
    throw InvalidConfiguration("run_game: learner has " +
                               std::to_string(learner.arm_count()) +
                               " arms, oracle has " +
                               std::to_string(oracle.arm_count()));
  }

  Transcript out;
  out.seed = seed;
  out.actions.reserve(T);
  out.losses.reserve(T);

  Rng rng(seed);
  auto cursor = oracle.cursor();
  for (std::size_t t = 1; t <= T; ++t) {
    const Action a = learner.choose(rng);
    const double loss = cursor->push(a);
    if (!(loss >= 0.0 && loss <= 1.0)) {
      throw OracleContractViolation(
          t, oracle.name() + " returned " + std::to_string(loss));
    }
    out.actions.push_back(a);
    out.losses.push_back(loss);
    learner.feedback(loss);
  }
  out.total_loss = sum_losses(out.losses);
  return out;
}

double sum_losses(std::span<const double> losses) {
  double total = 0.0;
  for (double l : losses) total += l;
  return total;
}

}  // namespace polreg
