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


#include "polreg/adversaries.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace polreg {

namespace {

void check_loss_range(double v, const std::string& where) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidConfiguration(where + ": loss " + std::to_string(v) +
                               " outside [0,1]");
  }
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

// -- ObliviousTable -----------------------------------------------------------

ObliviousTable::ObliviousTable(std::size_t rows, std::size_t k,
                               std::vector<double> values)
    : rows_(rows), k_(k), values_(std::move(values)) {
  if (rows_ == 0 || k_ == 0) {
    throw InvalidConfiguration("oblivious table must be non-empty");
  }
  if (values_.size() != rows_ * k_) {
    throw InvalidConfiguration("oblivious table: expected " +
                               std::to_string(rows_ * k_) + " entries, got " +
                               std::to_string(values_.size()));
  }
  for (double v : values_) check_loss_range(v, "oblivious table");
}

ObliviousTable::ObliviousTable(
    std::initializer_list<std::initializer_list<double>> rows)
    : ObliviousTable(rows.size(), rows.size() ? rows.begin()->size() : 0,
                     [&] {
                       std::vector<double> flat;
                       for (const auto& row : rows) {
                         if (row.size() != rows.begin()->size()) {
                           throw InvalidConfiguration(
                               "oblivious table: ragged rows");
                         }
                         flat.insert(flat.end(), row.begin(), row.end());
                       }
                       return flat;
                     }()) {}

ObliviousTable ObliviousTable::random(std::size_t rows, std::size_t k,
                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(rows * k);
  for (double& v : values) v = rng.uniform();
  return ObliviousTable(rows, k, std::move(values));
}

ObliviousTable ObliviousTable::parse_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t k = 0;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::size_t cols = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto cell = trim(body.substr(
          start, comma == std::string_view::npos ? comma : comma - start));
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size() ||
          cell.empty()) {
        throw InvalidConfiguration("csv line " + std::to_string(line_no) +
                                   ": cannot parse '" + std::string(cell) +
                                   "'");
      }
      check_loss_range(v, "csv line " + std::to_string(line_no));
      values.push_back(v);
      ++cols;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      k = cols;
    } else if (cols != k) {
      throw InvalidConfiguration("csv line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(k) +
                                 " columns, got " + std::to_string(cols));
    }
    ++rows;
  }
  return ObliviousTable(rows, k, std::move(values));
}

ObliviousTable ObliviousTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfiguration("cannot open loss table '" + path.string() +
                               "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

double ObliviousTable::at(std::size_t t, Action a) const {
  if (t == 0 || t > rows_) {
    throw HorizonExceeded("oblivious table has " + std::to_string(rows_) +
                          " rows, round " + std::to_string(t) +
                          " requested");
  }
  return values_[(t - 1) * k_ + a.index];
}

// -- Oracles ------------------------------------------------------------------

double ObliviousOracle::do_eval(std::size_t t, std::span<const Action> h) const {
  return table_.at(t, h.back());
}

SwitchingCostOracle::SwitchingCostOracle(ObliviousTable base, double cost)
    : base_(std::move(base)), cost_(cost) {
  if (!(cost >= 0.0 && cost <= 1.0)) {
    throw InvalidConfiguration("switching cost must lie in [0,1]");
  }
}

double SwitchingCostOracle::do_eval(std::size_t t,
                                    std::span<const Action> h) const {
  double loss = base_.at(t, h.back());
  if (t >= 2 && h[t - 1] != h[t - 2]) loss += cost_;
  return std::clamp(loss, 0.0, 1.0);
}

Theorem1Oracle::Theorem1Oracle(std::size_t k, Action y) : k_(k), y_(y) {
  if (k == 0 || y.index >= k) {
    throw InvalidConfiguration("theorem1: target arm out of range");
  }
}

double Theorem1Oracle::do_eval(std::size_t t, std::span<const Action> h) const {
  if (t == 1) return 0.0;
  return h.front() == y_ ? 1.0 : 0.0;
}

// -- EXP3 mimic ---------------------------------------------------------------

namespace {

class Exp3MimicCursor final : public OracleCursor {
 public:
  Exp3MimicCursor(std::size_t k, double gamma, Exp3Estimator estimator)
      : state_(k, gamma), estimator_(estimator) {}

  double peek(Action a) override { return prob(a); }

  double push(Action a) override {
    const double loss = prob(a);
    exp3_update(state_, a, loss, estimator_);
    state_.refresh_probs();
    ++rounds_;
    return loss;
  }

  std::size_t rounds() const override { return rounds_; }

 private:
  double prob(Action a) const {
    if (a.index >= state_.arm_count()) {
      throw ContractViolation("exp3_mimic: arm out of range");
    }
    return state_.last_probs[a.index];
  }

  Exp3State state_;
  Exp3Estimator estimator_;
  std::size_t rounds_ = 0;
};

}  // namespace

Exp3MimicOracle::Exp3MimicOracle(std::size_t k, double gamma,
                                 Exp3Estimator estimator)
    : k_(k), gamma_(gamma), estimator_(estimator) {
  if (k == 0) throw InvalidConfiguration("exp3_mimic: need k >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidConfiguration("exp3_mimic: gamma must lie in (0,1]");
  }
}

double Exp3MimicOracle::do_eval(std::size_t t,
                                std::span<const Action> h) const {
  Exp3State sim(k_, gamma_);
  for (std::size_t s = 0; s + 1 < t; ++s) {
    const double loss = sim.last_probs[h[s].index];
    exp3_update(sim, h[s], loss, estimator_);
    sim.refresh_probs();
  }
  return sim.last_probs[h[t - 1].index];
}

std::unique_ptr<OracleCursor> Exp3MimicOracle::cursor() const {
  return std::make_unique<Exp3MimicCursor>(k_, gamma_, estimator_);
}

// -- Random memory-bounded ----------------------------------------------------

RandomMemoryOracle::RandomMemoryOracle(std::size_t m, std::size_t k,
                                       std::size_t t_max, std::uint64_t seed)
    : m_(m), k_(k), t_max_(t_max), seed_(seed) {
  if (k == 0) throw InvalidConfiguration("random_memory: need k >= 1");
}

double RandomMemoryOracle::do_eval(std::size_t t,
                                   std::span<const Action> h) const {
  const std::size_t len = std::min(t, m_ + 1);
  std::uint64_t z = mix64(seed_ ^ 0x6a09e667f3bcc909ULL);
  z = mix64(z + t);
  for (Action a : h.subspan(t - len)) {
    z = mix64(z ^ (static_cast<std::uint64_t>(a.index) + 1) *
                      0x9e3779b97f4a7c15ULL);
  }
  return to_unit_interval(z);
}

// -- Factories ----------------------------------------------------------------

OraclePtr make_oblivious(ObliviousTable table) {
  return std::make_shared<ObliviousOracle>(std::move(table));
}

OraclePtr make_switching_cost(ObliviousTable base, double cost) {
  return std::make_shared<SwitchingCostOracle>(std::move(base), cost);
}

OraclePtr make_theorem1(Action y, std::size_t k) {
  return std::make_shared<Theorem1Oracle>(k, y);
}

OraclePtr make_exp3_mimic(std::size_t k, double gamma,
                          Exp3Estimator estimator) {
  return std::make_shared<Exp3MimicOracle>(k, gamma, estimator);
}

OraclePtr make_random_memory_bounded(std::size_t m, std::size_t k,
                                     std::size_t t_max,
                                     std::uint64_t adversary_seed) {
  return std::make_shared<RandomMemoryOracle>(m, k, t_max, adversary_seed);
}

}  // namespace polreg
