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


#include "polreg/minibatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace polreg {

BatchedLearner::BatchedLearner(std::unique_ptr<Learner> inner, std::size_t tau,
                               std::size_t drop_first)
    : Learner(inner ? inner->arm_count() : 1),
      inner_(std::move(inner)),
      tau_(tau),
      drop_first_(drop_first) {
  if (!inner_) throw InvalidConfiguration("wrap: inner learner is null");
  if (tau_ == 0) throw InvalidConfiguration("wrap: tau must be >= 1");
  if (tau_ <= drop_first_) {
    throw InvalidConfiguration("wrap_known_m: tau=" + std::to_string(tau_) +
                               " must exceed m=" + std::to_string(drop_first_));
  }
}

std::string BatchedLearner::name() const {
  std::string n = "batched(tau=" + std::to_string(tau_);
  if (drop_first_ > 0) n += ",m=" + std::to_string(drop_first_);
  return n + "," + inner_->name() + ")";
}

Action BatchedLearner::do_choose(Rng& rng) {
  if (in_batch_count_ == 0) current_ = inner_->choose(rng);
  return current_;
}

void BatchedLearner::do_feedback(Action, double loss) {
  if (in_batch_count_ >= drop_first_) accumulator_ += loss;
  ++in_batch_count_;
  if (in_batch_count_ == tau_) {
    const double mean =
        accumulator_ / static_cast<double>(tau_ - drop_first_);
    in_batch_count_ = 0;
    accumulator_ = 0.0;
    inner_->feedback(mean);
  }
}

std::unique_ptr<BatchedLearner> wrap(std::unique_ptr<Learner> inner,
                                     std::size_t tau) {
  return std::make_unique<BatchedLearner>(std::move(inner), tau, 0);
}

std::unique_ptr<BatchedLearner> wrap_known_m(std::unique_ptr<Learner> inner,
                                             std::size_t tau, std::size_t m) {
  return std::make_unique<BatchedLearner>(std::move(inner), tau, m);
}

double batched_loss(const LossOracle& oracle,
                    std::span<const Action> batch_actions, std::size_t tau,
                    std::size_t drop_first) {
  if (batch_actions.empty()) {
    throw ContractViolation("batched_loss: need at least one batch action");
  }
  if (tau <= drop_first) {
    throw InvalidConfiguration("batched_loss: tau must exceed drop_first");
  }
  const std::size_t j = batch_actions.size();
  History h;
  h.reserve(j * tau);
  for (std::size_t b = 0; b + 1 < j; ++b) {
    h.insert(h.end(), tau, batch_actions[b]);
  }
  double total = 0.0;
  for (std::size_t k = 1; k <= tau; ++k) {
    h.push_back(batch_actions[j - 1]);
    if (k > drop_first) total += oracle.eval(h.size(), h);
  }
  return total / static_cast<double>(tau - drop_first);
}

RegretRate::RegretRate(double c, double exponent) : C(c), q(exponent) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    throw InvalidConfiguration("regret rate: C must be positive");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw InvalidConfiguration("regret rate: q must lie in (0,1)");
  }
}

RegretRate exp3_rate(std::size_t k) {
  if (k < 2) throw InvalidConfiguration("exp3_rate: need k >= 2");
  const double kk = static_cast<double>(k);
  return RegretRate(std::sqrt(7.0 * kk * std::log(kk)), 0.5);
}

RegretRate exp3s_rate(std::size_t k, std::size_t s, std::size_t T) {
  if (k < 2 || s < 1 || T < 1) {
    throw InvalidConfiguration("exp3s_rate: need k >= 2, s >= 1, T >= 1");
  }
  const double kk = static_cast<double>(k);
  return RegretRate(
      std::sqrt(7.0 * kk * static_cast<double>(s) *
                std::log(kk * static_cast<double>(T))),
      0.5);
}

double batch_size_real(const RegretRate& rate, std::size_t T) {
  if (T == 0) throw InvalidConfiguration("batch size: T must be >= 1");
  const double denom = 2.0 - rate.q;
  return std::pow(rate.C, -1.0 / denom) *
         std::pow(static_cast<double>(T), (1.0 - rate.q) / denom);
}

std::size_t batch_size_general(const RegretRate& rate, std::size_t T) {
  const double rounded = std::round(batch_size_real(rate, T));
  const double clamped =
      std::clamp(rounded, 1.0, static_cast<double>(T));
  return static_cast<std::size_t>(clamped);
}

std::size_t batch_size_exp3(std::size_t k, std::size_t T) {
  return batch_size_general(exp3_rate(k), T);
}

std::size_t batch_size_exp3s(std::size_t k, std::size_t s, std::size_t T) {
  return batch_size_general(exp3s_rate(k, s, T), T);
}

double policy_regret_bound(const RegretRate& rate, std::size_t tau,
                           std::size_t T, std::size_t m, std::size_t s) {
  if (tau == 0) throw InvalidConfiguration("bound: tau must be >= 1");
  const double t = static_cast<double>(tau);
  const double horizon = static_cast<double>(T);
  return t * rate.C * std::pow(horizon / t, rate.q) +
         horizon * static_cast<double>(m) / t +
         static_cast<double>(s + 1) * t;
}

double policy_regret_leading_term(const RegretRate& rate, std::size_t T,
                                  std::size_t m) {
  const double e = 1.0 / (2.0 - rate.q);
  return static_cast<double>(m + 1) * std::pow(rate.C, e) *
         std::pow(static_cast<double>(T), e);
}

}  // namespace polreg
