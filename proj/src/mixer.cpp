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

#include "pulsebss/mixer.hpp"

#include <cmath>

#include "pulsebss/errors.hpp"

namespace pulsebss {

bool MixingMatrix::near_singular(double min_abs_det) const {
  return std::abs(det()) < min_abs_det;
}

void validate_mixing(const MixingMatrix& a) {
  if (!std::isfinite(a.a11) || !std::isfinite(a.a12) || !std::isfinite(a.a21) || !std::isfinite(a.a22)) {
    throw sim_error(errc::invalid_matrix, "mix: mixing matrix has non-finite entries");
  }
}

std::pair<Waveform, Waveform> mix(const Waveform& s_soi, const Waveform& s_int, const MixingMatrix& a) {
  validate_mixing(a);
  validate_waveform(s_soi, "mix");
  validate_waveform(s_int, "mix");
  if (s_soi.samples.size() != s_int.samples.size() || s_soi.dt != s_int.dt) {
    throw sim_error(errc::shape_mismatch, "mix: inputs must share dt and length");
  }

  const std::size_t n = s_soi.samples.size();
  Waveform x1, x2;
  x1.dt = x2.dt = s_soi.dt;
  x1.label = "x1";
  x2.label = "x2";
  x1.samples.resize(n);
  x2.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s_soi.samples[k];
    const double v = s_int.samples[k];
    x1.samples[k] = a.a11 * s + a.a12 * v;
    x2.samples[k] = a.a21 * s + a.a22 * v;
  }
  return {std::move(x1), std::move(x2)};
}

}  // namespace pulsebss
