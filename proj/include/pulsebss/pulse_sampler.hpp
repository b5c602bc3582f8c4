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

#ifndef PULSEBSS_PULSE_SAMPLER_HPP
#define PULSEBSS_PULSE_SAMPLER_HPP

#include "pulsebss/types.hpp"

namespace pulsebss {

enum class PulseShape { rect, gaussian_fwhm };

// Periodic sampling-pulse description.  Each pulse turns into one output
// sample: the pulse-weighted average of the waveform over the pulse
// support.  rect averages uniformly over [c - w/2, c + w/2]; gaussian_fwhm
// weights by a Gaussian with FWHM = width, truncated at +/- 2*width.
struct PulseTrain {
  double period_s = 0.0;  // spacing of pulse centers
  double width_s = 0.0;   // aperture
  PulseShape shape = PulseShape::rect;
  double offset_s = 0.0;  // first pulse center
};

void validate_pulse_train(const PulseTrain& p);

double duty_cycle(const PulseTrain& p);

// Pulses whose support does not fit inside the waveform are dropped.
// width_s <= dt collapses to nearest-point sampling (documented behavior,
// not an error).  period_s < dt is an oversampling-request error.
SampleStream sample(const Waveform& x, const PulseTrain& p);

}  // namespace pulsebss

#endif  // PULSEBSS_PULSE_SAMPLER_HPP
