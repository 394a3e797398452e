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


#include "polreg/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

namespace polreg {

namespace {

void check_transcript(const LossOracle& oracle, const Transcript& transcript) {
  if (transcript.actions.size() != transcript.losses.size()) {
    throw ContractViolation("transcript: actions and losses differ in length");
  }
  if (transcript.actions.empty()) {
    throw ContractViolation("transcript: empty");
  }
  for (Action a : transcript.actions) {
    if (a.index >= oracle.arm_count()) {
      throw ContractViolation("transcript: arm out of range for oracle");
    }
  }
}

// Counterfactual losses f_t(X_1..X_{t-1}, a) gathered along the player's own
// trajectory in one cursor pass.
struct Counterfactuals {
  std::size_t k = 0;
  double player_loss = 0.0;
  // per_arm[y] = sum_t f_t(X_1..X_{t-1}, y), summed in round order.
  std::vector<double> per_arm;
  // by_played[x * k + a] = sum over rounds with X_t = x of f_t(X_1..X_{t-1}, a).
  std::vector<double> by_played;
};

Counterfactuals gather_counterfactuals(const LossOracle& oracle,
                                       const Transcript& transcript) {
  check_transcript(oracle, transcript);
  const std::size_t k = oracle.arm_count();
  Counterfactuals out;
  out.k = k;
  out.player_loss = sum_losses(transcript.losses);
  out.per_arm.assign(k, 0.0);
  out.by_played.assign(k * k, 0.0);

  auto cursor = oracle.cursor();
  for (std::size_t t = 0; t < transcript.horizon(); ++t) {
    const Action x = transcript.actions[t];
    for (std::uint32_t a = 0; a < k; ++a) {
      const double loss = cursor->peek(Action{a});
      out.per_arm[a] += loss;
      out.by_played[x.index * k + a] += loss;
    }
    const double realized = cursor->push(x);
    if (realized != transcript.losses[t]) {
      throw ContractViolation("transcript does not match oracle at round " +
                              std::to_string(t + 1));
    }
  }
  return out;
}

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (r > cap / std::max<std::size_t>(base, 1)) {
      return std::numeric_limits<std::size_t>::max();
    }
    r *= base;
  }
  return r;
}

}  // namespace

// -- Replay -------------------------------------------------------------------

std::vector<double> replay(const LossOracle& oracle,
                           std::span<const Action> actions) {
  std::vector<double> losses;
  losses.reserve(actions.size());
  auto cursor = oracle.cursor();
  for (Action a : actions) losses.push_back(cursor->push(a));
  return losses;
}

double replay_total(const LossOracle& oracle, std::span<const Action> actions) {
  return sum_losses(replay(oracle, actions));
}

// -- Constant competitors -----------------------------------------------------

ArmValue standard_regret(const LossOracle& oracle,
                         const Transcript& transcript) {
  const auto cf = gather_counterfactuals(oracle, transcript);
  ArmValue best{-std::numeric_limits<double>::infinity(), Action{0}};
  for (std::uint32_t y = 0; y < cf.k; ++y) {
    const double value = cf.player_loss - cf.per_arm[y];
    if (value > best.value) best = {value, Action{y}};
  }
  return best;
}

ArmValue policy_regret(const LossOracle& oracle, const Transcript& transcript) {
  check_transcript(oracle, transcript);
  const double player = sum_losses(transcript.losses);
  const std::size_t T = transcript.horizon();
  ArmValue best{std::numeric_limits<double>::infinity(), Action{0}};
  for (std::uint32_t y = 0; y < oracle.arm_count(); ++y) {
    const History constant(T, Action{y});
    const double total = replay_total(oracle, constant);
    if (total < best.value) best = {total, Action{y}};
  }
  best.value = player - best.value;
  return best;
}

// -- Switching competitors ----------------------------------------------------

SwitchingCompetitor best_switching_competitor(const LossOracle& oracle,
                                              std::size_t T, std::size_t s,
                                              std::size_t budget) {
  const auto bound = oracle.memory();
  if (!bound.bounded()) {
    throw UnsupportedMetric(
        "switching competitor needs a bounded-memory oracle; " +
        oracle.name() + " is unbounded");
  }
  if (T == 0) throw InvalidConfiguration("switching competitor: T must be >= 1");

  const std::size_t k = oracle.arm_count();
  const std::size_t m = bound.value();
  // The state remembers enough actions to evaluate f (m of them) and to
  // detect a switch (at least one).
  const std::size_t keep = std::max<std::size_t>(m, 1);
  const std::size_t cap = std::numeric_limits<std::size_t>::max() / 4;
  const std::size_t suffixes = checked_pow(k, keep, cap);
  std::size_t work = suffixes;
  for (std::size_t factor : {s + 1, k, T}) {
    work = (work > cap / factor) ? cap : work * factor;
  }
  if (suffixes == std::numeric_limits<std::size_t>::max() || work > budget) {
    throw BudgetExceeded("switching DP needs ~" + std::to_string(work) +
                         " steps, budget is " + std::to_string(budget));
  }

  // suffix_count[t] = number of distinct last-min(t, keep) action tuples.
  std::vector<std::size_t> suffix_count(T + 1);
  for (std::size_t t = 0; t <= T; ++t) {
    suffix_count[t] = checked_pow(k, std::min(t, keep), cap);
  }
  const std::size_t layers = s + 1;
  auto index = [layers](std::size_t suffix, std::size_t used) {
    return suffix * layers + used;
  };

  // Scratch history for evaluation. Only the last m+1 entries are written;
  // the rest are arbitrary valid arms, which the memory bound makes irrelevant.
  History scratch(T, Action{0});
  auto loss_of = [&](std::size_t t, std::size_t suffix, std::uint32_t a) {
    // Evaluate round t+1 with suffix (holding min(t, keep) actions) then a.
    scratch[t] = Action{a};
    const std::size_t visible = std::min(t, m);
    std::size_t code = suffix;
    for (std::size_t i = 0; i < visible; ++i) {
      scratch[t - 1 - i] = Action{static_cast<std::uint32_t>(code % k)};
      code /= k;
    }
    return oracle.eval(t + 1, std::span<const Action>(scratch.data(), t + 1));
  };
  auto next_suffix = [&](std::size_t t, std::size_t suffix, std::uint32_t a) {
    return (suffix * k + a) % suffix_count[t + 1];
  };

  // value[t][index(suffix, used)] = least loss over rounds t+1..T.
  std::vector<std::vector<double>> value(T + 1);
  value[T].assign(suffix_count[T] * layers, 0.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> step_loss(k);
  for (std::size_t t = T; t-- > 0;) {
    value[t].assign(suffix_count[t] * layers, kInf);
    for (std::size_t suffix = 0; suffix < suffix_count[t]; ++suffix) {
      for (std::uint32_t a = 0; a < k; ++a) step_loss[a] = loss_of(t, suffix, a);
      const std::size_t last = suffix % k;
      for (std::size_t used = 0; used < layers; ++used) {
        double best = kInf;
        for (std::uint32_t a = 0; a < k; ++a) {
          const std::size_t next_used = used + (t > 0 && a != last ? 1 : 0);
          if (next_used > s) continue;
          const double v = step_loss[a] +
                           value[t + 1][index(next_suffix(t, suffix, a),
                                              next_used)];
          best = std::min(best, v);
        }
        value[t][index(suffix, used)] = best;
      }
    }
  }

  SwitchingCompetitor out;
  out.loss = value[0][index(0, 0)];
  out.sequence.reserve(T);
  std::size_t suffix = 0;
  std::size_t used = 0;
  for (std::size_t t = 0; t < T; ++t) {
    const double target = value[t][index(suffix, used)];
    const std::size_t last = suffix % k;
    bool found = false;
    for (std::uint32_t a = 0; a < k && !found; ++a) {
      const std::size_t next_used = used + (t > 0 && a != last ? 1 : 0);
      if (next_used > s) continue;
      const std::size_t ns = next_suffix(t, suffix, a);
      const double v = loss_of(t, suffix, a) + value[t + 1][index(ns, next_used)];
      if (v == target) {
        out.sequence.push_back(Action{a});
        suffix = ns;
        used = next_used;
        found = true;
      }
    }
    if (!found) throw NumericError("switching DP: reconstruction failed");
  }
  return out;
}

double policy_regret_switching(const LossOracle& oracle,
                               const Transcript& transcript, std::size_t s,
                               std::size_t budget) {
  check_transcript(oracle, transcript);
  const auto best =
      best_switching_competitor(oracle, transcript.horizon(), s, budget);
  return sum_losses(transcript.losses) - best.loss;
}

// -- Transformations ----------------------------------------------------------

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::kConstant: return "constant";
    case TransformKind::kInternal: return "internal";
    case TransformKind::kSwap: return "swap";
    case TransformKind::kExplicit: return "explicit";
  }
  return "unknown";
}

TransformKind parse_transform_kind(const std::string& s) {
  if (s == "constant") return TransformKind::kConstant;
  if (s == "internal") return TransformKind::kInternal;
  if (s == "swap") return TransformKind::kSwap;
  throw InvalidConfiguration("unknown transformation kind '" + s +
                             "' (expected constant|internal|swap)");
}

TransformationSet::TransformationSet(TransformKind kind, std::size_t k,
                                     std::vector<ActionMap> maps)
    : kind_(kind), k_(k), maps_(std::move(maps)) {
  if (maps_.empty()) {
    throw InvalidConfiguration("transformation set is empty");
  }
  for (const auto& map : maps_) {
    if (map.size() != k_) {
      throw InvalidConfiguration("transformation is not total on [0,k)");
    }
    for (Action a : map) {
      if (a.index >= k_) {
        throw InvalidConfiguration("transformation maps outside [0,k)");
      }
    }
  }
}

TransformationSet TransformationSet::constant(std::size_t k) {
  std::vector<ActionMap> maps;
  for (std::uint32_t y = 0; y < k; ++y) maps.emplace_back(k, Action{y});
  return TransformationSet(TransformKind::kConstant, k, std::move(maps));
}

TransformationSet TransformationSet::internal(std::size_t k) {
  ActionMap id(k);
  for (std::uint32_t x = 0; x < k; ++x) id[x] = Action{x};
  std::vector<ActionMap> maps;
  for (std::uint32_t y = 0; y < k; ++y) {
    for (std::uint32_t to = 0; to < k; ++to) {
      if (to == y) continue;
      maps.push_back(id);
      maps.back()[y] = Action{to};
    }
  }
  return TransformationSet(TransformKind::kInternal, k, std::move(maps));
}

TransformationSet TransformationSet::swap(std::size_t k, std::size_t budget) {
  const std::size_t count = checked_pow(k, k, budget);
  if (count > budget) {
    throw BudgetExceeded("swap set has k^k maps for k=" + std::to_string(k) +
                         ", budget is " + std::to_string(budget));
  }
  std::vector<ActionMap> maps;
  maps.reserve(count);
  ActionMap current(k, Action{0});
  for (std::size_t i = 0; i < count; ++i) {
    maps.push_back(current);
    // Odometer increment, last position fastest: lexicographic order.
    for (std::size_t pos = k; pos-- > 0;) {
      if (++current[pos].index < k) break;
      current[pos].index = 0;
    }
  }
  return TransformationSet(TransformKind::kSwap, k, std::move(maps));
}

TransformationSet TransformationSet::explicit_maps(std::size_t k,
                                                   std::vector<ActionMap> maps) {
  return TransformationSet(TransformKind::kExplicit, k, std::move(maps));
}

TransformationSet TransformationSet::identity(std::size_t k) {
  ActionMap id(k);
  for (std::uint32_t x = 0; x < k; ++x) id[x] = Action{x};
  return explicit_maps(k, {id});
}

TransformationSet TransformationSet::of_kind(TransformKind kind, std::size_t k,
                                             std::size_t swap_budget) {
  switch (kind) {
    case TransformKind::kConstant: return constant(k);
    case TransformKind::kInternal: return internal(k);
    case TransformKind::kSwap: return swap(k, swap_budget);
    case TransformKind::kExplicit: break;
  }
  throw InvalidConfiguration("of_kind: explicit sets need their maps");
}

namespace {

// Higher value wins; exact ties go to the lexicographically smaller map.
void keep_better(MapValue& best, double value, const ActionMap& map) {
  if (value > best.value || (value == best.value && map < best.map)) {
    best.value = value;
    best.map = map;
  }
}

void check_phi(const LossOracle& oracle, const TransformationSet& phi) {
  if (phi.arm_count() != oracle.arm_count()) {
    throw InvalidConfiguration("transformation set arm count differs from oracle");
  }
}

}  // namespace

MapValue phi_regret(const LossOracle& oracle, const Transcript& transcript,
                    const TransformationSet& phi) {
  check_phi(oracle, phi);
  const auto cf = gather_counterfactuals(oracle, transcript);
  MapValue best{-std::numeric_limits<double>::infinity(), {}};
  for (const auto& map : phi.maps()) {
    double competitor = 0.0;
    for (std::size_t x = 0; x < cf.k; ++x) {
      competitor += cf.by_played[x * cf.k + map[x].index];
    }
    keep_better(best, cf.player_loss - competitor, map);
  }
  return best;
}

MapValue policy_phi_regret(const LossOracle& oracle,
                           const Transcript& transcript,
                           const TransformationSet& phi) {
  check_phi(oracle, phi);
  check_transcript(oracle, transcript);
  const double player = sum_losses(transcript.losses);
  const std::size_t T = transcript.horizon();

  // Maps that agree on the arms actually played yield the same sequence.
  std::vector<bool> played(oracle.arm_count(), false);
  for (Action a : transcript.actions) played[a.index] = true;
  std::map<std::vector<std::uint32_t>, double> replayed;

  MapValue best{-std::numeric_limits<double>::infinity(), {}};
  History transformed(T);
  for (const auto& map : phi.maps()) {
    std::vector<std::uint32_t> key;
    for (std::size_t x = 0; x < map.size(); ++x) {
      if (played[x]) key.push_back(map[x].index);
    }
    auto it = replayed.find(key);
    if (it == replayed.end()) {
      for (std::size_t t = 0; t < T; ++t) {
        transformed[t] = map[transcript.actions[t].index];
      }
      it = replayed.emplace(std::move(key), replay_total(oracle, transformed))
               .first;
    }
    keep_better(best, player - it->second, map);
  }
  return best;
}

// -- Report -------------------------------------------------------------------

RegretReport compute_report(const LossOracle& oracle,
                            const Transcript& transcript,
                            const ReportOptions& options) {
  check_transcript(oracle, transcript);
  RegretReport report;
  report.horizon = transcript.horizon();
  report.player_loss = sum_losses(transcript.losses);
  if (options.standard) report.standard = standard_regret(oracle, transcript);
  if (options.policy) report.policy = policy_regret(oracle, transcript);

  for (std::size_t s : options.switches) {
    try {
      const auto best = best_switching_competitor(
          oracle, transcript.horizon(), s, options.switching_budget);
      report.switching.push_back(
          {s, report.player_loss - best.loss, best.loss, best.sequence});
    } catch (const UnsupportedMetric& e) {
      report.skipped.emplace_back("switching_regret_s" + std::to_string(s),
                                  e.what());
    } catch (const BudgetExceeded& e) {
      report.skipped.emplace_back("switching_regret_s" + std::to_string(s),
                                  e.what());
    }
  }

  for (TransformKind kind : options.phi_kinds) {
    try {
      const auto set =
          TransformationSet::of_kind(kind, oracle.arm_count(), options.swap_budget);
      const auto ext = phi_regret(oracle, transcript, set);
      const auto pol = policy_phi_regret(oracle, transcript, set);
      report.phi.push_back({kind, ext.value, ext.map, pol.value, pol.map});
    } catch (const BudgetExceeded& e) {
      report.skipped.emplace_back("phi_regret_" + to_string(kind), e.what());
    } catch (const InvalidConfiguration& e) {
      // e.g. internal maps with a single arm.
      report.skipped.emplace_back("phi_regret_" + to_string(kind), e.what());
    }
  }
  return report;
}

}  // namespace polreg
