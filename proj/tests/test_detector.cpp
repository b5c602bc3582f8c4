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
#include <limits>

#include "doctest.h"
#include "pulsebss/detector.hpp"
#include "pulsebss/errors.hpp"

using namespace pulsebss;

namespace {

DetectorParams paper_detector() {
  DetectorParams d;
  d.p_scw_dbm = 16.0;
  d.t_fwhm_s = 90e-12;
  d.pulse_period_s = 1.0 / 37e6;
  return calibrate_two_point(d);
}

}  // namespace

TEST_CASE("pulsed saturation power from the duty ratio") {
  DetectorParams d;
  d.p_scw_dbm = 16.0;
  d.t_fwhm_s = 90e-12;
  d.pulse_period_s = 1.0 / 37e6;
  const double p_sp = saturation_avg_power_dbm(d);
  CHECK(p_sp == doctest::Approx(-8.8).epsilon(0.012));  // within 0.1 dB
  // identity: p_scw + 10 log10(t_fwhm / t_p) exactly
  CHECK(p_sp == d.p_scw_dbm + 10.0 * std::log10(d.t_fwhm_s / d.pulse_period_s));
}

TEST_CASE("CW limit returns the CW saturation power") {
  DetectorParams d;
  d.p_scw_dbm = 11.5;
  d.t_fwhm_s = 1e-9;
  d.pulse_period_s = 1e-9;
  CHECK(saturation_avg_power_dbm(d) == 11.5);
}

TEST_CASE("doubling the pulse period lowers the saturation power by ~3 dB") {
  DetectorParams d;
  d.p_scw_dbm = 16.0;
  d.t_fwhm_s = 90e-12;
  d.pulse_period_s = 1.0 / 37e6;
  const double a = saturation_avg_power_dbm(d);
  d.pulse_period_s *= 2.0;
  const double b = saturation_avg_power_dbm(d);
  CHECK(a - b == doctest::Approx(10.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("small-signal deviation from linearity is below 1% at 20 dB under saturation") {
  const DetectorParams d = paper_detector();
  const double p_sp_dbm = saturation_avg_power_dbm(d);
  const double p = p_sp_dbm - 20.0;
  const double v = respond_noiseless_v(p, d);
  const double v_lin = d.slope_v_per_mw * dbm_to_mw(p);
  const double dev = 1.0 - v / v_lin;
  // series: 1 - (1 - exp(-x))/x = x/2 - x^2/6 + ... with x = 0.01
  CHECK(dev == doctest::Approx(0.01 / 2.0 - 0.01 * 0.01 / 6.0).epsilon(1e-4));
  CHECK(dev < 0.01);
}

TEST_CASE("noiseless response is strictly increasing in power") {
  // Grid spans the measured sweep range; far beyond it the exponential
  // saturates below double resolution.
  const DetectorParams d = paper_detector();
  double prev = -1.0;
  for (double p = -60.0; p <= 0.0; p += 0.25) {
    const double v = respond_noiseless_v(p, d);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("vanishing power leaves pure noise with mean zero") {
  const DetectorParams d = paper_detector();
  double acc = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    acc += respond(-300.0, d, Seed{static_cast<std::uint64_t>(i)});
  }
  acc /= n;
  CHECK(std::abs(acc) < 4.0 * d.noise_sigma_v / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("two-point calibration meets both anchors within tolerance") {
  const DetectorParams d = paper_detector();
  const double snr_hi = snr_analytic_db(-10.0, d);
  const double snr_lo = snr_analytic_db(-41.0, d);
  CHECK(std::abs(snr_hi - 39.0) < 2.0);
  CHECK(std::abs(snr_lo - 7.8) < 1.0);

  // Monte-Carlo curve agrees with the analytic values.
  const auto curve = snr_curve(d, {-10.0, -41.0}, 4000, Seed{5});
  CHECK(curve[0].snr_db == doctest::Approx(snr_hi).epsilon(0.02));
  CHECK(curve[1].snr_db == doctest::Approx(snr_lo).epsilon(0.05));

  // SNR keeps dropping below the second anchor.
  CHECK(snr_analytic_db(-44.0, d) < snr_lo);
}

TEST_CASE("zero noise reports the +inf sentinel") {
  DetectorParams d = paper_detector();
  d.noise_sigma_v = 0.0;
  const auto curve = snr_curve(d, {-20.0}, 200, Seed{1});
  CHECK(curve[0].snr_db == std::numeric_limits<double>::infinity());
  CHECK(snr_analytic_db(-20.0, d) == std::numeric_limits<double>::infinity());
}

TEST_CASE("snr_curve validates n_repeats") {
  CHECK_THROWS_AS(snr_curve(paper_detector(), {-10.0}, 99, Seed{1}), sim_error);
}

TEST_CASE("calibrated linear range exceeds 30 dB") {
  const DetectorParams d = paper_detector();
  const LinearRange r = linear_range(d, 0.1, 1.0);
  CHECK_FALSE(r.empty);
  CHECK(r.range_db >= 30.0);
  CHECK(r.upper_dbm < saturation_avg_power_dbm(d));
}

TEST_CASE("huge noise collapses the range to zero") {
  DetectorParams d = paper_detector();
  d.noise_sigma_v = 1e9;
  const LinearRange r = linear_range(d, 0.1, 1.0);
  CHECK(r.empty);
  CHECK(r.range_db == 0.0);
}

TEST_CASE("loose tolerance and floor span the full grid") {
  DetectorParams d = paper_detector();
  const PowerGrid grid{-60.0, 0.0, 0.1};
  const double r = linear_range_db(d, 0.999999, -std::numeric_limits<double>::infinity(), grid);
  CHECK(r == doctest::Approx(60.0).epsilon(1e-9));
}

TEST_CASE("apply_detector is a constant gain in the deep linear regime") {
  DetectorParams d = paper_detector();
  d.noise_sigma_v = 0.0;
  SampleStream s;
  for (int i = 0; i < 64; ++i) {
    s.times.push_back(i);
    s.values.push_back(std::sin(0.37 * i));
  }
  const double p_op = saturation_avg_power_dbm(d) - 45.0;
  const auto r = apply_detector(s, p_op, d, Seed{1});
  CHECK(r.clipped == 0);
  const double gain = d.slope_v_per_mw * dbm_to_mw(p_op);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    CHECK(r.stream.values[k] == doctest::Approx(gain * s.values[k]).epsilon(2e-3));
  }
}

TEST_CASE("apply_detector compresses the swing at the saturation power") {
  DetectorParams d = paper_detector();
  d.noise_sigma_v = 0.0;
  SampleStream s;
  s.times = {0.0, 1.0};
  s.values = {1.0, -1.0};
  const double p_op = saturation_avg_power_dbm(d);
  const auto r = apply_detector(s, p_op, d, Seed{1});
  const double swing = r.stream.values[0] - r.stream.values[1];
  const double linear_swing = d.slope_v_per_mw * dbm_to_mw(p_op) * 2.0;
  CHECK(swing < linear_swing * 0.8);
  CHECK(swing > 0.0);
}

TEST_CASE("inverse correction restores linearity near saturation") {
  DetectorParams d = paper_detector();
  d.noise_sigma_v = 0.0;
  SampleStream s;
  for (int i = 0; i < 101; ++i) {
    s.times.push_back(i);
    s.values.push_back(-1.0 + 0.02 * i);
  }
  const double p_op = saturation_avg_power_dbm(d);
  const auto corrected = apply_detector(s, p_op, d, Seed{1}, true);
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    CHECK(corrected.stream.values[k] == doctest::Approx(s.values[k]).epsilon(1e-6));
  }
}

TEST_CASE("apply_detector clips out-of-envelope inputs with a count") {
  const DetectorParams d = paper_detector();
  SampleStream s;
  s.times = {0.0, 1.0, 2.0};
  s.values = {1.5, 0.0, -2.0};
  const auto r = apply_detector(s, -30.0, d, Seed{1});
  CHECK(r.clipped == 2);
}

TEST_CASE("apply_detector is bit-identical under a fixed seed") {
  const DetectorParams d = paper_detector();
  SampleStream s;
  for (int i = 0; i < 256; ++i) {
    s.times.push_back(i);
    s.values.push_back(std::cos(0.1 * i));
  }
  const auto a = apply_detector(s, -25.0, d, Seed{77});
  const auto b = apply_detector(s, -25.0, d, Seed{77});
  CHECK(a.stream.values == b.stream.values);
  const auto c = apply_detector(s, -25.0, d, Seed{78});
  CHECK(a.stream.values != c.stream.values);
}

TEST_CASE("detector parameter validation") {
  DetectorParams d;
  d.t_fwhm_s = 0.0;
  CHECK_THROWS_AS(validate_detector(d), sim_error);
  d = DetectorParams{};
  d.pulse_period_s = d.t_fwhm_s / 2.0;
  CHECK_THROWS_AS(validate_detector(d), sim_error);
  d = DetectorParams{};
  d.noise_sigma_v = -1.0;
  CHECK_THROWS_AS(validate_detector(d), sim_error);
}
