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

#include "pulsebss/errors.hpp"

#include <cmath>

#include "pulsebss/types.hpp"

namespace pulsebss {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_spec: return "invalid_spec";
    case errc::shape_mismatch: return "shape_mismatch";
    case errc::invalid_matrix: return "invalid_matrix";
    case errc::oversampling_request: return "oversampling_request";
    case errc::empty_input: return "empty_input";
    case errc::ill_posed: return "ill_posed";
    case errc::degenerate_fit: return "degenerate_fit";
    case errc::isotropic_mixture: return "isotropic_mixture";
    case errc::no_fourth_harmonic: return "no_fourth_harmonic";
    case errc::degenerate: return "degenerate";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

void validate_waveform(const Waveform& w, const char* who) {
  if (!(w.dt > 0.0)) {
    throw sim_error(errc::invalid_spec, std::string(who) + ": waveform dt must be positive");
  }
  if (w.samples.empty()) {
    throw sim_error(errc::invalid_spec, std::string(who) + ": waveform has no samples");
  }
  for (double v : w.samples) {
    if (!std::isfinite(v)) {
      throw sim_error(errc::invalid_spec, std::string(who) + ": waveform contains non-finite sample");
    }
  }
}

}  // namespace pulsebss
