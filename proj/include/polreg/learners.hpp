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
#include <span>
#include <string>
#include <vector>

#include "polreg/core.hpp"

namespace polreg {

// How the played arm's loss turns into an importance-weighted estimate.
//
//   kGain: g = 1 - loss, w_a *= exp(gamma * (g / p_a) / k)   (Auer et al.)
//   kLoss: w_a *= exp(-gamma * (loss / p_a) / k)
//
// Both leave unplayed arms untouched. They induce different dynamics against
// adversaries that react to the learner's own distribution.
enum class Exp3Estimator { kGain, kLoss };

std::string to_string(Exp3Estimator e);
Exp3Estimator parse_exp3_estimator(const std::string& s);

// p_i = (1 - gamma) w_i / sum(w) + gamma / k. Throws NumericError on
// non-finite or non-positive weights.
std::vector<double> exp3_distribution(std::span<const double> weights,
                                      double gamma);

struct Exp3State {
  Exp3State(std::size_t k, double gamma);

  std::vector<double> weights;
  double gamma;
  // Distribution from the most recent choose; updates divide by these.
  std::vector<double> last_probs;

  std::size_t arm_count() const { return weights.size(); }
  void refresh_probs() { last_probs = exp3_distribution(weights, gamma); }
};

struct Exp3SState : Exp3State {
  Exp3SState(std::size_t k, double gamma, double alpha);

  double alpha;
};

// One exponential-weights step on the played arm, then renormalization so the
// largest weight is 1. Throws ContractViolation for loss outside [0,1].
void exp3_update(Exp3State& state, Action action, double loss,
                 Exp3Estimator estimator = Exp3Estimator::kGain);

// exp3_update followed by weight sharing w_i += (alpha / k) * sum(w).
void exp3s_update(Exp3SState& state, Action action, double loss);

// min(1, sqrt(k ln k / ((e - 1) J))).
double exp3_tuned_gamma(std::size_t k, std::size_t J);

// EXP3.S tuning for s switches over J rounds:
// min(1, sqrt(k (s ln(kJ) + e) / ((e - 1) J))).
double exp3s_tuned_gamma(std::size_t k, std::size_t s, std::size_t J);
inline double exp3s_default_alpha(std::size_t J) {
  return 1.0 / static_cast<double>(J);
}

class Exp3Learner final : public Learner {
 public:
  Exp3Learner(std::size_t k, double gamma,
              Exp3Estimator estimator = Exp3Estimator::kGain);

  std::string name() const override;
  const Exp3State& state() const { return state_; }
  // Distribution the next choose will sample from.
  std::vector<double> distribution() const;

 protected:
  Action do_choose(Rng& rng) override;
  void do_feedback(Action played, double loss) override;

 private:
  Exp3State state_;
  Exp3Estimator estimator_;
};

class Exp3SLearner final : public Learner {
 public:
  Exp3SLearner(std::size_t k, double gamma, double alpha);

  std::string name() const override;
  const Exp3SState& state() const { return state_; }

 protected:
  Action do_choose(Rng& rng) override;
  void do_feedback(Action played, double loss) override;

 private:
  Exp3SState state_;
};

// Always plays the same arm; realizes the constant competitor y^T.
class FixedAction final : public Learner {
 public:
  FixedAction(std::size_t k, Action y);

  std::string name() const override;

 protected:
  Action do_choose(Rng&) override { return y_; }
  void do_feedback(Action, double) override {}

 private:
  Action y_;
};

class UniformRandom final : public Learner {
 public:
  explicit UniformRandom(std::size_t k) : Learner(k) {}

  std::string name() const override { return "uniform"; }

 protected:
  Action do_choose(Rng& rng) override;
  void do_feedback(Action, double) override {}
};

}  // namespace polreg
