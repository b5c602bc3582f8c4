// Copyright 2026 The pulsebss Authors
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

#include "pulsebss/rng.hpp"

#include <cmath>

namespace pulsebss {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSaltGamma = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kGaussDomain = 0x6A09E667F3BCC909ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double u64_to_unit(std::uint64_t x) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}
}  // namespace

std::uint64_t CounterRng::mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

CounterRng::CounterRng(Seed seed, StreamTag tag, std::uint64_t salt) {
  key_ = mix64(seed.value + kGolden * static_cast<std::uint64_t>(tag) + kSaltGamma * salt);
  gauss_key_ = mix64(key_ ^ kGaussDomain);
}

std::uint64_t CounterRng::at(std::uint64_t index) const {
  return mix64(key_ + kGolden * (index + 1));
}

std::uint64_t CounterRng::next_u64() { return at(counter_++); }

double CounterRng::next_unit() { return u64_to_unit(next_u64()); }

double CounterRng::gaussian_at(std::uint64_t index) const {
  // Box-Muller on two indexed uniforms; u1 is kept in (0, 1] so the log
  // is always finite.
  std::uint64_t a = mix64(gauss_key_ + kGolden * (2 * index + 1));
  std::uint64_t b = mix64(gauss_key_ + kGolden * (2 * index + 2));
  double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  double u2 = u64_to_unit(b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double CounterRng::next_gaussian() { return gaussian_at(gauss_counter_++); }

Seed CounterRng::derive(Seed seed, StreamTag tag, std::uint64_t salt) {
  return Seed{mix64(seed.value + kGolden * static_cast<std::uint64_t>(tag) + kSaltGamma * (salt + 1))};
}

}  // namespace pulsebss
