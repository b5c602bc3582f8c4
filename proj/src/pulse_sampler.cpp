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

#include "pulsebss/pulse_sampler.hpp"

#include <cmath>

#include "pulsebss/errors.hpp"

namespace pulsebss {

namespace {
constexpr double kFourLn2 = 2.77258872223978123767892848583;  // 4 ln 2
}

void validate_pulse_train(const PulseTrain& p) {
  if (!(p.period_s > 0.0) || !std::isfinite(p.period_s)) {
    throw sim_error(errc::invalid_spec, "pulse train: period must be positive");
  }
  if (!(p.width_s > 0.0) || p.width_s > p.period_s) {
    throw sim_error(errc::invalid_spec, "pulse train: width must satisfy 0 < width <= period");
  }
  if (!(p.offset_s >= 0.0) || p.offset_s >= p.period_s) {
    throw sim_error(errc::invalid_spec, "pulse train: offset must lie in [0, period)");
  }
}

double duty_cycle(const PulseTrain& p) {
  validate_pulse_train(p);
  return p.width_s / p.period_s;
}

SampleStream sample(const Waveform& x, const PulseTrain& p) {
  validate_pulse_train(p);
  validate_waveform(x, "sample");
  if (p.period_s < x.dt) {
    throw sim_error(errc::oversampling_request, "sample: pulse period below the waveform grid step");
  }

  const double dt = x.dt;
  const double t_last = x.last_time();
  const std::size_t n = x.samples.size();
  const bool point_mode = p.width_s <= dt;
  const bool gaussian = p.shape == PulseShape::gaussian_fwhm;
  // rect support is the pulse width; the Gaussian tail is truncated at
  // two widths either side of the center.
  const double half_support = point_mode ? 0.0 : (gaussian ? 2.0 * p.width_s : 0.5 * p.width_s);

  SampleStream out;
  for (std::uint64_t k = 0;; ++k) {
    const double c = p.offset_s + static_cast<double>(k) * p.period_s;
    if (c + half_support > t_last) break;
    if (c - half_support < 0.0) continue;  // support not covered yet

    double value;
    if (point_mode) {
      const auto idx = static_cast<std::size_t>(std::llround(c / dt));
      value = x.samples[idx < n ? idx : n - 1];
    } else {
      const auto lo = static_cast<std::int64_t>(std::floor((c - half_support) / dt)) - 1;
      const auto hi = static_cast<std::int64_t>(std::ceil((c + half_support) / dt)) + 1;
      const std::size_t i0 = lo < 0 ? 0 : static_cast<std::size_t>(lo);
      const std::size_t i1 = hi >= static_cast<std::int64_t>(n) ? n - 1 : static_cast<std::size_t>(hi);
      double sw = 0.0, swx = 0.0;
      for (std::size_t i = i0; i <= i1; ++i) {
        const double u = static_cast<double>(i) * dt - c;
        if (std::abs(u) > half_support) continue;
        const double w = gaussian ? std::exp(-kFourLn2 * (u / p.width_s) * (u / p.width_s)) : 1.0;
        sw += w;
        swx += w * x.samples[i];
      }
      if (sw == 0.0) {
        // support narrower than one grid step after truncation
        const auto idx = static_cast<std::size_t>(std::llround(c / dt));
        value = x.samples[idx < n ? idx : n - 1];
      } else {
        value = swx / sw;
      }
    }
    out.times.push_back(c);
    out.values.push_back(value);
  }

  if (out.values.empty()) {
    throw sim_error(errc::empty_input, "sample: waveform does not cover one full pulse");
  }
  return out;
}

}  // namespace pulsebss
