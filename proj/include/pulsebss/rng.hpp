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

#ifndef PULSEBSS_RNG_HPP
#define PULSEBSS_RNG_HPP

#include <cstdint>

#include "pulsebss/types.hpp"

namespace pulsebss {

// Tags identifying which operation a random substream feeds.  Every
// randomized operation derives its own substream from (seed, tag, salt),
// so operations never share or perturb each other's randomness.
enum class StreamTag : std::uint64_t {
  soi_symbols = 1,
  interference = 2,
  detector_respond = 3,
  detector_apply = 4,
  trial_seed = 5,
  generic = 6,
};

// Counter-based generator: output i is a pure hash of (key, i), where the
// key mixes (seed, tag, salt).  Stateless indexing means draws can be
// addressed out of order (gaussian_at) and streams are reproducible on any
// platform with IEEE doubles.  Core mixer is the splitmix64 finalizer.
class CounterRng {
 public:
  CounterRng(Seed seed, StreamTag tag, std::uint64_t salt = 0);

  std::uint64_t next_u64();
  double next_unit();      // uniform in [0, 1)
  double next_gaussian();  // standard normal

  // Gaussian draw at an absolute index, independent of the sequential
  // counter.  Index i always yields the same value for a given stream.
  double gaussian_at(std::uint64_t index) const;

  // Derives a child seed (used for per-trial seeds).
  static Seed derive(Seed seed, StreamTag tag, std::uint64_t salt);

  static std::uint64_t mix64(std::uint64_t z);

 private:
  std::uint64_t at(std::uint64_t index) const;

  std::uint64_t key_ = 0;
  std::uint64_t gauss_key_ = 0;
  std::uint64_t counter_ = 0;
  std::uint64_t gauss_counter_ = 0;
};

}  // namespace pulsebss

#endif  // PULSEBSS_RNG_HPP
