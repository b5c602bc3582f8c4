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

#ifndef PULSEBSS_METRICS_HPP
#define PULSEBSS_METRICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pulsebss/types.hpp"

namespace pulsebss {

// Summary of one seeded end-to-end run.
struct TrialReport {
  std::uint64_t seed = 0;
  double phi0_deg = 0.0;
  double theta0_deg = 0.0;
  double ber = 0.0;
  double snr_db = 0.0;  // recovered-vs-reference signal-to-residual ratio
  double whiteness_residual = 0.0;
  int soi_channel = 1;
  double kurtosis_soi = 0.0;
  double kurtosis_other = 0.0;
  double eye_opening = 0.0;
};

struct AlignResult {
  Waveform aligned;
  double gain = 0.0;  // may be negative; resolves the sign ambiguity
};

// Least-squares gain g minimizing ||g*recovered - reference||^2.
AlignResult align(const Waveform& recovered, const Waveform& reference);

struct BerResult {
  double ber = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
  bool grid_flagged = false;  // bit period not commensurate with the grid
};

// Sign decision on the average over the center half of each bit window.
BerResult ber(const Waveform& aligned, const std::vector<double>& reference_bits,
              double bit_period_s);

struct EyeData {
  // Traces folded modulo two bit periods; trace r holds consecutive
  // samples starting at an even bit boundary.
  std::vector<std::vector<double>> traces;
  double samples_per_bit = 0.0;
  double opening = 0.0;  // (min high rail - max low rail) / rail separation
};

EyeData eye_data(const Waveform& w, double bit_period_s);

// Smallest arc (degrees) containing all phi0 values modulo 90.
double phi0_spread_deg(const std::vector<double>& phi0_deg);
double phi0_spread_deg(const std::vector<TrialReport>& trials);

// CSV emission.  Schemas:
//   scatter:      t_s,x1,x2
//   moment curve: angle_deg,measured,fitted   (fitted sampled at 1 degree)
//   eye:          t_frac,trace_id,value
//   trial summary: seed,phi0_deg,theta0_deg,ber,eye_opening,whiteness
void export_scatter(const SampleStream& x1, const SampleStream& x2, const std::string& path);

void export_moment_curve(const std::vector<double>& angles_deg,
                         const std::vector<double>& measured,
                         const std::function<double(double /*deg*/)>& fitted,
                         const std::string& path);

void export_eye(const EyeData& eye, const std::string& path, std::size_t max_traces = 200);

void export_trial_summary(const std::vector<TrialReport>& trials, const std::string& path);

}  // namespace pulsebss

#endif  // PULSEBSS_METRICS_HPP
