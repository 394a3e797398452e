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


#include "polreg/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

namespace polreg {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidConfiguration("exp3: gamma " + std::to_string(gamma) +
                               " outside [0,1]");
  }
}

void renormalize(std::vector<double>& w) {
  const double top = *std::max_element(w.begin(), w.end());
  if (!std::isfinite(top) || top <= 0.0) {
    throw NumericError("exp3: weights degenerated (max " + std::to_string(top) +
                       ")");
  }
  // Floor at the smallest normal double: an arm that has fallen 300+ orders
  // of magnitude behind would otherwise underflow to zero.
  for (double& x : w) x = std::max(x / top, std::numeric_limits<double>::min());
}

}  // namespace

std::string to_string(Exp3Estimator e) {
  return e == Exp3Estimator::kGain ? "gain" : "loss";
}

Exp3Estimator parse_exp3_estimator(const std::string& s) {
  if (s == "gain") return Exp3Estimator::kGain;
  if (s == "loss") return Exp3Estimator::kLoss;
  throw InvalidConfiguration("unknown exp3 estimator '" + s +
                             "' (expected gain|loss)");
}

std::vector<double> exp3_distribution(std::span<const double> weights,
                                      double gamma) {
  if (weights.empty()) throw InvalidConfiguration("exp3: no arms");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw NumericError("exp3: non-finite or non-positive weight " +
                         std::to_string(w));
    }
    total += w;
  }
  if (!std::isfinite(total)) throw NumericError("exp3: weight sum overflowed");

  const double k = static_cast<double>(weights.size());
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    p[i] = (1.0 - gamma) * weights[i] / total + gamma / k;
  }
  return p;
}

Exp3State::Exp3State(std::size_t k, double g) : weights(k, 1.0), gamma(g) {
  if (k == 0) throw InvalidConfiguration("exp3: need k >= 1");
  check_gamma(gamma);
  refresh_probs();
}

Exp3SState::Exp3SState(std::size_t k, double g, double a)
    : Exp3State(k, g), alpha(a) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidConfiguration("exp3s: alpha must be finite and >= 0");
  }
}

void exp3_update(Exp3State& state, Action action, double loss,
                 Exp3Estimator estimator) {
  const std::size_t k = state.arm_count();
  if (action.index >= k) throw ContractViolation("exp3_update: arm out of range");
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw ContractViolation("exp3_update: loss " + std::to_string(loss) +
                            " outside [0,1]");
  }
  if (state.last_probs.size() != k) state.refresh_probs();

  const double p = state.last_probs[action.index];
  const double scale = state.gamma / static_cast<double>(k);
  const double exponent = estimator == Exp3Estimator::kGain
                              ? scale * (1.0 - loss) / p
                              : -scale * loss / p;
  state.weights[action.index] *= std::exp(exponent);
  renormalize(state.weights);
}

void exp3s_update(Exp3SState& state, Action action, double loss) {
  exp3_update(state, action, loss);
  if (state.alpha > 0.0) {
    const double total =
        std::accumulate(state.weights.begin(), state.weights.end(), 0.0);
    const double share =
        state.alpha / static_cast<double>(state.arm_count()) * total;
    for (double& w : state.weights) w += share;
    renormalize(state.weights);
  }
}

double exp3_tuned_gamma(std::size_t k, std::size_t J) {
  if (J == 0) throw InvalidConfiguration("exp3_tuned_gamma: J must be >= 1");
  const double kk = static_cast<double>(k);
  const double g = std::sqrt(kk * std::log(kk) /
                             ((std::numbers::e - 1.0) * static_cast<double>(J)));
  return std::min(1.0, g);
}

double exp3s_tuned_gamma(std::size_t k, std::size_t s, std::size_t J) {
  if (J == 0) throw InvalidConfiguration("exp3s_tuned_gamma: J must be >= 1");
  const double kk = static_cast<double>(k);
  const double jj = static_cast<double>(J);
  const double g =
      std::sqrt(kk * (static_cast<double>(s) * std::log(kk * jj) +
                      std::numbers::e) /
                ((std::numbers::e - 1.0) * jj));
  return std::min(1.0, g);
}

// -- Exp3Learner --------------------------------------------------------------

Exp3Learner::Exp3Learner(std::size_t k, double gamma, Exp3Estimator estimator)
    : Learner(k), state_(k, gamma), estimator_(estimator) {}

std::string Exp3Learner::name() const {
  return "exp3(gamma=" + std::to_string(state_.gamma) +
         ",estimator=" + to_string(estimator_) + ")";
}

std::vector<double> Exp3Learner::distribution() const {
  return exp3_distribution(state_.weights, state_.gamma);
}

Action Exp3Learner::do_choose(Rng& rng) {
  state_.refresh_probs();
  return Action{static_cast<std::uint32_t>(rng.sample(state_.last_probs))};
}

void Exp3Learner::do_feedback(Action played, double loss) {
  exp3_update(state_, played, loss, estimator_);
}

// -- Exp3SLearner -------------------------------------------------------------

Exp3SLearner::Exp3SLearner(std::size_t k, double gamma, double alpha)
    : Learner(k), state_(k, gamma, alpha) {}

std::string Exp3SLearner::name() const {
  return "exp3s(gamma=" + std::to_string(state_.gamma) +
         ",alpha=" + std::to_string(state_.alpha) + ")";
}

Action Exp3SLearner::do_choose(Rng& rng) {
  state_.refresh_probs();
  return Action{static_cast<std::uint32_t>(rng.sample(state_.last_probs))};
}

void Exp3SLearner::do_feedback(Action played, double loss) {
  exp3s_update(state_, played, loss);
}

// -- Baselines ----------------------------------------------------------------

FixedAction::FixedAction(std::size_t k, Action y) : Learner(k), y_(y) {
  if (y.index >= k) throw InvalidConfiguration("fixed: arm out of range");
}

std::string FixedAction::name() const {
  return "fixed(" + std::to_string(y_.index) + ")";
}

Action UniformRandom::do_choose(Rng& rng) {
  return Action{static_cast<std::uint32_t>(rng.below(arm_count()))};
}

}  // namespace polreg
