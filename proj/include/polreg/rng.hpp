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
#include <limits>
#include <span>

namespace polreg {

// SplitMix64 finalizer. Stable across platforms; also used as the hash behind
// the random memory-bounded adversary.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based generator: output i is mix64(seed + (i+1)*golden). Models
// std::uniform_random_bit_generator, but the helpers below avoid the
// implementation-defined <random> distributions so that transcripts are
// bit-identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }

  double uniform() { return to_unit_interval((*this)()); }

  // Uniform integer in [0, n). Lemire's multiply-shift; the bias is at most
  // n / 2^64, negligible for arm counts.
  std::size_t below(std::size_t n) {
    __extension__ using u128 = unsigned __int128;
    const auto wide = static_cast<u128>((*this)()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

  // Index drawn from a probability vector by inverse CDF. Mass lost to
  // rounding falls on the last index with positive probability.
  std::size_t sample(std::span<const double> probs);

  // Independent generator for a named sub-stream.
  Rng split(std::uint64_t stream) const {
    return Rng(mix64(state_ ^ mix64(stream + kGolden)));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace polreg
