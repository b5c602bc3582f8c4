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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "pulsebss/errors.hpp"
#include "pulsebss/mixer.hpp"
#include "pulsebss/pulse_sampler.hpp"
#include "pulsebss/rng.hpp"
#include "pulsebss/signalgen.hpp"

using namespace pulsebss;

namespace {

Waveform random_wave(std::size_t n, double dt, Seed seed) {
  CounterRng rng(seed, StreamTag::generic);
  Waveform w;
  w.dt = dt;
  w.samples.resize(n);
  for (auto& v : w.samples) v = rng.next_gaussian();
  return w;
}

// Independent brute-force oracle: enumerate every waveform sample and
// every pulse center; no index arithmetic shared with the implementation.
std::vector<std::pair<double, double>> brute_force_rect(const Waveform& x, const PulseTrain& p) {
  std::vector<std::pair<double, double>> out;
  const double h = 0.5 * p.width_s;
  for (std::uint64_t k = 0;; ++k) {
    const double c = p.offset_s + static_cast<double>(k) * p.period_s;
    if (c + h > x.last_time()) break;
    if (c - h < 0.0) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      const double u = static_cast<double>(i) * x.dt - c;
      if (std::abs(u) <= h) {
        sum += x.samples[i];
        ++count;
      }
    }
    out.emplace_back(c, sum / static_cast<double>(count));
  }
  return out;
}

}  // namespace

TEST_CASE("rect sampling equals brute-force window means exactly") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    CounterRng rng(Seed{trial}, StreamTag::generic, 999);
    const double dt = 1e-9;
    const Waveform x = random_wave(4000, dt, Seed{trial + 100});
    PulseTrain p;
    p.period_s = dt * (20.0 + 180.0 * rng.next_unit());
    p.width_s = p.period_s * (0.1 + 0.85 * rng.next_unit());
    if (p.width_s <= dt) p.width_s = 2.5 * dt;
    p.offset_s = p.period_s * rng.next_unit() * 0.99;
    p.shape = PulseShape::rect;

    const SampleStream got = sample(x, p);
    const auto want = brute_force_rect(x, p);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.times[i] == want[i].first);
      CHECK(got.values[i] == want[i].second);
    }
  }
}

TEST_CASE("width at or below the grid step is nearest-point decimation") {
  const double dt = 1e-9;
  const Waveform x = random_wave(1000, dt, Seed{42});
  PulseTrain p{7.0 * dt, 0.5 * dt, PulseShape::rect, 3.0 * dt};
  const SampleStream s = sample(x, p);
  REQUIRE(s.size() > 100);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto idx = static_cast<std::size_t>(std::llround(s.times[i] / dt));
    CHECK(s.values[i] == x.samples[idx]);
  }
}

TEST_CASE("constant waveforms are fixed points for all shapes") {
  const double c = 0.7853981633974483;
  Waveform x;
  x.dt = 1e-9;
  x.samples.assign(5000, c);
  for (PulseShape shape : {PulseShape::rect, PulseShape::gaussian_fwhm}) {
    PulseTrain p{100e-9, 13e-9, shape, 50e-9};
    const SampleStream s = sample(x, p);
    REQUIRE(s.size() > 10);
    for (double v : s.values) CHECK(v == doctest::Approx(c).epsilon(4e-16));
  }
}

TEST_CASE("a rect window spanning one sine period averages to nearly zero") {
  const double dt = 1e-10;
  const double f = 50e6;
  Waveform x;
  x.dt = dt;
  x.samples.resize(200000);
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    x.samples[i] = std::sin(2.0 * M_PI * f * static_cast<double>(i) * dt);
  }
  const double tau = 1.0 / f;  // one full period
  PulseTrain p{2e-6, tau, PulseShape::rect, 1e-6};
  const SampleStream s = sample(x, p);
  const double bound = 2.0 / (tau / dt);
  REQUIRE(s.size() >= 9);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(std::abs(s.values[i]) < bound);
    // brute-force numerical integral over the same window
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < x.samples.size(); ++j) {
      if (std::abs(static_cast<double>(j) * dt - s.times[i]) <= 0.5 * tau) {
        acc += x.samples[j];
        ++cnt;
      }
    }
    CHECK(s.values[i] == acc / static_cast<double>(cnt));
  }
}

TEST_CASE("duty cycle arithmetic") {
  CHECK(duty_cycle({1e-6, 5e-9, PulseShape::rect, 0.0}) == doctest::Approx(0.005));
  CHECK(duty_cycle({1e-6, 1e-6, PulseShape::rect, 0.0}) == 1.0);

  const double rep_period = 1.0 / 37e6;
  const double duty = duty_cycle({rep_period, 70e-15, PulseShape::gaussian_fwhm, 0.0});
  CHECK(duty == doctest::Approx(2.59e-6).epsilon(0.01));
  CHECK(duty < 1e-4);
  CHECK(duty > 1e-8);
}

TEST_CASE("output count tracks duration over period") {
  const double dt = 1e-9;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const Waveform x = random_wave(5000 + 321 * trial, dt, Seed{trial});
    PulseTrain p{dt * (50.0 + 13.0 * static_cast<double>(trial)), 5.0 * dt, PulseShape::rect, 2.0 * dt};
    const SampleStream s = sample(x, p);
    const auto expect = static_cast<long long>(x.duration() / p.period_s);
    CHECK(std::llabs(static_cast<long long>(s.size()) - expect) <= 1);
  }
}

TEST_CASE("strictly increasing times with period spacing") {
  const Waveform x = random_wave(3000, 1e-9, Seed{4});
  PulseTrain p{37e-9, 10e-9, PulseShape::gaussian_fwhm, 21e-9};
  const SampleStream s = sample(x, p);
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s.times[i] > s.times[i - 1]);
    CHECK(s.times[i] - s.times[i - 1] == doctest::Approx(p.period_s).epsilon(1e-12));
  }
}

TEST_CASE("conditioned sample variance degrades monotonically with aperture") {
  // Binary source plus band-limited noise: the conditional spread of the
  // sampled values given the center symbol should not grow as the
  // aperture shrinks back toward one bit.  Averaged over seeds.
  const double bit_rate = 200e6;
  const std::uint32_t spb = 32;
  const double dt = 1.0 / (bit_rate * spb);
  const double bit = 1.0 / bit_rate;
  const std::vector<double> taus = {1.0 * bit, 2.0 * bit, 5.0 * bit, 10.0 * bit};
  std::vector<double> avg_var(taus.size(), 0.0);

  const int n_seeds = 8;
  for (int sd = 0; sd < n_seeds; ++sd) {
    SoiSpec soi_spec{SoiKind::binary_nrz, bit_rate, 4000, spb, 1.0};
    const Waveform soi = gen_soi(soi_spec, Seed{static_cast<std::uint64_t>(sd)});
    const std::vector<double> bits = gen_soi_symbols(soi_spec, Seed{static_cast<std::uint64_t>(sd)});
    const Waveform noise =
        gen_interference({bit_rate, 1.0, 301}, soi.duration(), dt, Seed{static_cast<std::uint64_t>(sd)});
    auto [x1, x2] = mix(soi, noise, MixingMatrix{1.0, 1.0, 1.0, 1.0});

    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
      PulseTrain p{taus.back() * 2.0, taus[ti], PulseShape::rect, taus.back()};
      const SampleStream s = sample(x1, p);
      // condition on the symbol under the pulse center
      double acc[2] = {0, 0}, acc2[2] = {0, 0};
      std::size_t cnt[2] = {0, 0};
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto b = static_cast<std::size_t>(s.times[i] / bit);
        const int cls = bits[b] > 0 ? 1 : 0;
        acc[cls] += s.values[i];
        acc2[cls] += s.values[i] * s.values[i];
        ++cnt[cls];
      }
      double var = 0.0;
      for (int cls = 0; cls < 2; ++cls) {
        if (cnt[cls] < 2) continue;
        const double m = acc[cls] / static_cast<double>(cnt[cls]);
        var += acc2[cls] / static_cast<double>(cnt[cls]) - m * m;
      }
      avg_var[ti] += var / n_seeds;
    }
  }
  for (std::size_t i = 1; i < avg_var.size(); ++i) {
    CHECK(avg_var[i] <= avg_var[i - 1] * 1.02);
  }
}

TEST_CASE("oversampling request and short-waveform errors") {
  const Waveform x = random_wave(100, 1e-9, Seed{6});
  CHECK_THROWS_AS(sample(x, PulseTrain{0.5e-9, 0.4e-9, PulseShape::rect, 0.0}), sim_error);
  // valid period, but no pulse support fits inside the waveform
  CHECK_THROWS_AS(sample(x, PulseTrain{1e-6, 1e-7, PulseShape::rect, 0.0}), sim_error);
  CHECK_THROWS_AS(validate_pulse_train(PulseTrain{1e-6, 2e-6, PulseShape::rect, 0.0}), sim_error);
  CHECK_THROWS_AS(validate_pulse_train(PulseTrain{1e-6, 1e-7, PulseShape::rect, 2e-6}), sim_error);
}
