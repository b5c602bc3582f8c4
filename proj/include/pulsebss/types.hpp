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

#ifndef PULSEBSS_TYPES_HPP
#define PULSEBSS_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace pulsebss {

// Deterministic seed for every randomized operation.  Identical seed and
// parameters reproduce bit-identical results.
struct Seed {
  std::uint64_t value = 0;
};

// Uniformly sampled real-valued signal.  Sample i sits at time i * dt.
struct Waveform {
  double dt = 0.0;  // seconds per sample
  std::vector<double> samples;
  std::string label;

  double duration() const { return dt * static_cast<double>(samples.size()); }
  double time_at(std::size_t i) const { return dt * static_cast<double>(i); }
  double last_time() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }
};

// Throws sim_error(invalid_spec) unless dt > 0, samples non-empty, all finite.
void validate_waveform(const Waveform& w, const char* who);

// Undersampled (time, value) pairs produced by pulse sampling.  Times are
// the pulse centers, strictly increasing with constant spacing.
struct SampleStream {
  std::vector<double> times;   // seconds
  std::vector<double> values;  // same units as the sampled waveform

  std::size_t size() const { return values.size(); }
};

}  // namespace pulsebss

#endif  // PULSEBSS_TYPES_HPP
