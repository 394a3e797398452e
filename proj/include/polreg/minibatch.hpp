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
#include <memory>
#include <span>
#include <string>

#include "polreg/core.hpp"

namespace polreg {

// Mini-batching wrapper. Rounds are grouped into consecutive blocks of tau;
// the inner learner picks Z_j at the start of block j, the wrapper plays Z_j
// for the whole block and then feeds the inner learner one value: the mean of
// the block's losses after discarding the first drop_first of them.
//
// A trailing partial block at the horizon still plays Z_{J+1} but delivers no
// feedback. The wrapper never consults the oracle's memory bound.
class BatchedLearner final : public Learner {
 public:
  BatchedLearner(std::unique_ptr<Learner> inner, std::size_t tau,
                 std::size_t drop_first = 0);

  std::string name() const override;

  std::size_t tau() const { return tau_; }
  std::size_t drop_first() const { return drop_first_; }
  std::size_t in_batch_count() const { return in_batch_count_; }
  double loss_accumulator() const { return accumulator_; }
  const Learner& inner() const { return *inner_; }

 protected:
  Action do_choose(Rng& rng) override;
  void do_feedback(Action played, double loss) override;

 private:
  std::unique_ptr<Learner> inner_;
  std::size_t tau_;
  std::size_t drop_first_;
  Action current_{};
  std::size_t in_batch_count_ = 0;
  double accumulator_ = 0.0;
};

// Plain wrapper: the inner learner sees the mean of all tau block losses.
std::unique_ptr<BatchedLearner> wrap(std::unique_ptr<Learner> inner,
                                     std::size_t tau);

// Known-memory variant: the first m losses of every block are dropped and the
// inner learner sees the mean of the last tau - m. Requires tau > m.
std::unique_ptr<BatchedLearner> wrap_known_m(std::unique_ptr<Learner> inner,
                                             std::size_t tau, std::size_t m);

// The j-th loss the inner learner faces, as a function of its own choices:
//   fhat_j(z_1..z_j) = mean over k in (drop_first, tau] of
//                      f_{(j-1)tau+k}(z_1^tau, ..., z_{j-1}^tau, z_j^k).
// batch_actions holds z_1..z_j. Evaluated straight from the oracle.
double batched_loss(const LossOracle& oracle, std::span<const Action> batch_actions,
                    std::size_t tau, std::size_t drop_first = 0);

// Leading term of a standard-regret bound R(J) = C J^q.
struct RegretRate {
  RegretRate(double C, double q);

  double C;
  double q;
};

// EXP3 over k arms: C = sqrt(7 k ln k), q = 1/2.
RegretRate exp3_rate(std::size_t k);
// EXP3.S with s switches over T rounds: C = sqrt(7 k s ln(kT)), q = 1/2.
RegretRate exp3s_rate(std::size_t k, std::size_t s, std::size_t T);

// Unrounded C^{-1/(2-q)} T^{(1-q)/(2-q)}.
double batch_size_real(const RegretRate& rate, std::size_t T);

// batch_size_real rounded to nearest, floored at 1 and capped at T.
std::size_t batch_size_general(const RegretRate& rate, std::size_t T);
std::size_t batch_size_exp3(std::size_t k, std::size_t T);
std::size_t batch_size_exp3s(std::size_t k, std::size_t s, std::size_t T);

// tau C (T/tau)^q + T m / tau + (s + 1) tau. With s = 0 this is the constant
// competitor bound; s > 0 covers competitors with at most s switches.
double policy_regret_bound(const RegretRate& rate, std::size_t tau,
                           std::size_t T, std::size_t m, std::size_t s = 0);

// (m + 1) C^{1/(2-q)} T^{1/(2-q)}: the leading term of the bound at the
// tuned batch size.
double policy_regret_leading_term(const RegretRate& rate, std::size_t T,
                                  std::size_t m);

}  // namespace polreg
