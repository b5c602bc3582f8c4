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

#include "pulsebss/signalgen.hpp"

#include <cmath>

#include "pulsebss/errors.hpp"
#include "pulsebss/fft.hpp"
#include "pulsebss/rng.hpp"

namespace pulsebss {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

void validate_soi(const SoiSpec& s) {
  if (!(s.bit_rate > 0.0) || !std::isfinite(s.bit_rate)) {
    throw sim_error(errc::invalid_spec, "gen_soi: bit_rate must be positive");
  }
  if (s.n_bits < 1) throw sim_error(errc::invalid_spec, "gen_soi: n_bits must be >= 1");
  if (s.samples_per_bit < 1) throw sim_error(errc::invalid_spec, "gen_soi: samples_per_bit must be >= 1");
  if (!std::isfinite(s.amplitude) || s.amplitude < 0.0) {
    throw sim_error(errc::invalid_spec, "gen_soi: amplitude must be finite and non-negative");
  }
}
}  // namespace

std::vector<double> gen_soi_symbols(const SoiSpec& spec, Seed seed) {
  validate_soi(spec);
  CounterRng rng(seed, StreamTag::soi_symbols);
  std::vector<double> symbols(spec.n_bits);
  if (spec.kind == SoiKind::binary_nrz) {
    for (auto& s : symbols) {
      s = (rng.next_u64() & 1u) ? spec.amplitude : -spec.amplitude;
    }
  } else {
    // 4-PAM levels with unit mean square at amplitude 1
    static const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    const double scale = spec.amplitude / std::sqrt(5.0);
    for (auto& s : symbols) {
      s = levels[rng.next_u64() & 3u] * scale;
    }
  }
  return symbols;
}

Waveform gen_soi(const SoiSpec& spec, Seed seed) {
  const std::vector<double> symbols = gen_soi_symbols(spec, seed);
  Waveform w;
  w.dt = 1.0 / (spec.bit_rate * static_cast<double>(spec.samples_per_bit));
  w.label = "soi";
  w.samples.resize(symbols.size() * spec.samples_per_bit);
  std::size_t k = 0;
  for (double s : symbols) {
    for (std::uint32_t i = 0; i < spec.samples_per_bit; ++i) w.samples[k++] = s;
  }
  return w;
}

std::vector<double> design_lowpass(double cutoff_hz, double dt, std::uint32_t taps) {
  if (taps < 3 || (taps % 2) == 0) {
    throw sim_error(errc::invalid_spec, "design_lowpass: taps must be odd and >= 3");
  }
  const double nu = cutoff_hz * dt;  // cycles per sample
  const std::size_t m = taps / 2;    // group delay
  std::vector<double> h(taps);
  double sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double u = static_cast<double>(k) - static_cast<double>(m);
    const double sinc = (u == 0.0) ? 2.0 * nu : std::sin(2.0 * kPi * nu * u) / (kPi * u);
    const double window = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(taps - 1));
    h[k] = sinc * window;
    sum += h[k];
  }
  for (auto& v : h) v /= sum;  // unit DC gain
  return h;
}

Waveform gen_interference(const InterferenceSpec& spec, double duration_s, double dt, Seed seed) {
  if (!(dt > 0.0)) throw sim_error(errc::invalid_spec, "gen_interference: dt must be positive");
  if (!(duration_s > 0.0)) throw sim_error(errc::invalid_spec, "gen_interference: duration must be positive");
  const double nyquist = 0.5 / dt;
  if (!(spec.bandwidth > 0.0) || spec.bandwidth > nyquist * (1.0 + 1e-12)) {
    throw sim_error(errc::invalid_spec, "gen_interference: bandwidth must be in (0, 1/(2 dt)]");
  }
  if (!(spec.rms >= 0.0) || !std::isfinite(spec.rms)) {
    throw sim_error(errc::invalid_spec, "gen_interference: rms must be finite and non-negative");
  }

  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s / dt));
  if (n < 1) throw sim_error(errc::invalid_spec, "gen_interference: duration shorter than one sample");

  Waveform w;
  w.dt = dt;
  w.label = "interference";
  if (spec.rms == 0.0) {
    w.samples.assign(n, 0.0);
    return w;
  }

  const std::vector<double> h = design_lowpass(spec.bandwidth, dt, spec.filter_taps);

  // Extra leading samples cover the filter warm-up; only the fully
  // overlapped region is kept.
  const std::size_t n_white = n + h.size() - 1;
  std::vector<double> white(n_white);
  CounterRng rng(seed, StreamTag::interference);
  for (std::size_t i = 0; i < n_white; ++i) white[i] = rng.gaussian_at(i);

  w.samples = fir_filter_valid(white, h);

  double ss = 0.0;
  for (double v : w.samples) ss += v * v;
  const double rms_emp = std::sqrt(ss / static_cast<double>(n));
  const double scale = (rms_emp > 0.0) ? spec.rms / rms_emp : 0.0;
  for (auto& v : w.samples) v *= scale;
  return w;
}

}  // namespace pulsebss
