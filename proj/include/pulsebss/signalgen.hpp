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

#ifndef PULSEBSS_SIGNALGEN_HPP
#define PULSEBSS_SIGNALGEN_HPP

#include <cstdint>
#include <vector>

#include "pulsebss/types.hpp"

namespace pulsebss {

enum class SoiKind { binary_nrz, qam16_real };

// Signal-of-interest description.  binary_nrz emits +/-amplitude symbols;
// qam16_real emits the 4-level alphabet {-3,-1,+1,+3} * amplitude/sqrt(5),
// which has unit mean square at amplitude 1.
struct SoiSpec {
  SoiKind kind = SoiKind::binary_nrz;
  double bit_rate = 0.0;  // Hz
  std::uint64_t n_bits = 0;
  std::uint32_t samples_per_bit = 1;
  double amplitude = 1.0;
};

// Band-limited Gaussian interferer.  Band limiting uses a linear-phase
// Hamming windowed-sinc FIR (odd tap count); the warm-up region is
// discarded and the result rescaled so the empirical rms equals `rms`.
struct InterferenceSpec {
  double bandwidth = 0.0;  // Hz, low-pass cutoff
  double rms = 0.0;
  std::uint32_t filter_taps = 601;  // odd
};

// Symbol sequence the NRZ waveform expands; exposed so bit-error counting
// can use the exact transmitted symbols.
std::vector<double> gen_soi_symbols(const SoiSpec& spec, Seed seed);

Waveform gen_soi(const SoiSpec& spec, Seed seed);

Waveform gen_interference(const InterferenceSpec& spec, double duration_s, double dt, Seed seed);

// Lowpass prototype used by gen_interference (normalized DC gain 1).
std::vector<double> design_lowpass(double cutoff_hz, double dt, std::uint32_t taps);

}  // namespace pulsebss

#endif  // PULSEBSS_SIGNALGEN_HPP
