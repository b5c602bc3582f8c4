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

#ifndef PULSEBSS_FFT_HPP
#define PULSEBSS_FFT_HPP

#include <complex>
#include <span>
#include <vector>

namespace pulsebss {

// In-place radix-2 FFT; size must be a power of two.  The inverse applies
// the 1/N normalization.  Self-contained so filtered output is identical
// from run to run regardless of external library versions.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

// Linear FIR convolution restricted to the fully-overlapped region:
// out[k] = sum_j h[j] * x[k + h.size()-1 - j], k in [0, x.size()-h.size()].
// Uses overlap-save FFT blocks; numerically equivalent to direct
// convolution within rounding.
std::vector<double> fir_filter_valid(std::span<const double> x, std::span<const double> h);

// Averaged periodogram (Welch, rectangular window) with segment length
// `segment` (power of two).  Returns one-sided power spectral density in
// arbitrary units; bin i covers frequency i / (segment * dt).
std::vector<double> periodogram(std::span<const double> x, double dt, std::size_t segment);

}  // namespace pulsebss

#endif  // PULSEBSS_FFT_HPP
