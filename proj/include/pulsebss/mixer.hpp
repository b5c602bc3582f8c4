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

#ifndef PULSEBSS_MIXER_HPP
#define PULSEBSS_MIXER_HPP

#include <utility>

#include "pulsebss/types.hpp"

namespace pulsebss {

struct MixingMatrix {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  double det() const { return a11 * a22 - a12 * a21; }
  // Conditioning diagnostic; scenarios below the threshold are flagged.
  bool near_singular(double min_abs_det) const;
};

void validate_mixing(const MixingMatrix& a);

// x1 = a11*soi + a12*interference, x2 = a21*soi + a22*interference,
// elementwise on a shared grid.
std::pair<Waveform, Waveform> mix(const Waveform& s_soi, const Waveform& s_int, const MixingMatrix& a);

}  // namespace pulsebss

#endif  // PULSEBSS_MIXER_HPP
