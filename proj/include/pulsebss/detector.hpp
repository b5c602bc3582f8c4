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

#ifndef PULSEBSS_DETECTOR_HPP
#define PULSEBSS_DETECTOR_HPP

#include <cstdint>
#include <vector>

#include "pulsebss/types.hpp"

namespace pulsebss {

// Photodetector + amplifier chain model.  The peak-voltage response to
// pulsed input saturates exponentially around the pulsed saturation power
// derived from the CW saturation power and the duty ratio of impulse
// response width to pulse period:
//
//   P_sp,mW = P_scw,mW * (t_fwhm / pulse_period)
//   V(P)    = slope * P_sp,mW * (1 - exp(-P_mW / P_sp,mW)) + N(0, sigma)
//
// The small-signal limit is linear with gain `slope_v_per_mw`; the
// noiseless curve is strictly increasing in P.
struct DetectorParams {
  double p_scw_dbm = 16.0;         // CW saturation power
  double t_fwhm_s = 90e-12;        // system impulse-response FWHM
  double pulse_period_s = 1.0 / 37e6;
  double slope_v_per_mw = 1.0;     // linear-region responsivity
  double noise_sigma_v = 1.2166e-5;  // additive rms noise on the peak voltage
};

void validate_detector(const DetectorParams& d);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// Average power of the pulsed input that saturates the chain, in dBm.
double saturation_avg_power_dbm(const DetectorParams& d);

double respond_noiseless_v(double avg_power_dbm, const DetectorParams& d);

// One noisy peak-voltage measurement; deterministic per (power, params, seed).
double respond(double avg_power_dbm, const DetectorParams& d, Seed seed);

// SNR of the mean peak voltage against the additive noise, in dB of the
// mean/std ratio (10*log10).  +inf when the noise is zero.
double snr_analytic_db(double avg_power_dbm, const DetectorParams& d);

struct SnrPoint {
  double power_dbm = 0.0;
  double v_peak_mean = 0.0;
  double v_peak_std = 0.0;
  double snr_db = 0.0;
};

// Monte-Carlo SNR sweep: for each power, n_repeats noisy responses are
// reduced to mean/std.  Zero std reports the +inf sentinel.
std::vector<SnrPoint> snr_curve(const DetectorParams& d, const std::vector<double>& powers_dbm,
                                std::uint32_t n_repeats, Seed seed);

struct PowerGrid {
  double min_dbm = -80.0;
  double max_dbm = 20.0;
  double step_db = 0.01;
};

// Width of the usable power window: upper edge is the largest grid power
// whose noiseless response deviates from the linear extrapolation by at
// most `linearity_tol`; lower edge is the smallest grid power whose
// analytic SNR reaches `snr_floor_db`.  Returns 0 with `empty` set when
// the window is empty.
struct LinearRange {
  double range_db = 0.0;
  double lower_dbm = 0.0;
  double upper_dbm = 0.0;
  bool empty = false;
};

LinearRange linear_range(const DetectorParams& d, double linearity_tol, double snr_floor_db,
                         const PowerGrid& grid = {});
double linear_range_db(const DetectorParams& d, double linearity_tol, double snr_floor_db,
                       const PowerGrid& grid = {});

// Calibration anchor: the model should report `snr_db` at `power_dbm`;
// `weight` sets its pull in the log-domain least-squares solve.
struct SnrAnchor {
  double power_dbm = 0.0;
  double snr_db = 0.0;
  double weight = 1.0;
};

// Solves (slope, noise) from SNR anchors using the noiseless response.
// The anchors only pin the slope/noise ratio; slope is fixed at
// 1 V/mW by convention and the noise follows.  Defaults are the anchors
// used by the bundled detector scenario, weighted by 1/tolerance^2.
DetectorParams calibrate_two_point(DetectorParams base,
                                   const std::vector<SnrAnchor>& anchors = {
                                       {-10.0, 39.0, 0.25},
                                       {-41.0, 7.8, 1.0},
                                   });

// Inverse of the noiseless response (mW from volts), clamped below the
// saturation asymptote.
double inverse_response_mw(double v, const DetectorParams& d);

struct DetectorApplied {
  SampleStream stream;
  std::size_t clipped = 0;  // inputs outside [-1, 1], clamped with a count
};

// Routes normalized sample values through the response curve centered at
// the operating power: P_k = P_op * (1 + v_k), output V(P_k) + noise -
// V(P_op).  With `inverse_correction` the noiseless curve is inverted
// afterwards, returning values in input units.  Noise is indexed per
// sample, so output is deterministic per (seed, index).
DetectorApplied apply_detector(const SampleStream& s, double input_avg_power_dbm,
                               const DetectorParams& d, Seed seed,
                               bool inverse_correction = false,
                               std::uint64_t stream_salt = 0);

}  // namespace pulsebss

#endif  // PULSEBSS_DETECTOR_HPP
