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

#ifndef PULSEBSS_CONFIG_HPP
#define PULSEBSS_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "pulsebss/bss.hpp"
#include "pulsebss/detector.hpp"
#include "pulsebss/mixer.hpp"
#include "pulsebss/pulse_sampler.hpp"
#include "pulsebss/signalgen.hpp"
#include "pulsebss/types.hpp"

namespace pulsebss {

struct DetectorConfig {
  bool enabled = false;
  DetectorParams params;
  double avg_power_dbm = -20.0;
  bool inverse_correction = false;
  // detector-curve sweep settings
  double sweep_min_dbm = -50.0;
  double sweep_max_dbm = 0.0;
  double sweep_step_db = 0.5;
  std::uint32_t sweep_repeats = 1000;
  double linearity_tol = 0.1;
  double snr_floor_db = 1.0;
};

struct BssConfig {
  std::vector<double> theta_angles_deg;  // explicit angles win over counts
  std::vector<double> phi_angles_deg;
  std::uint32_t n_theta = 6;
  std::uint32_t n_phi = 8;
  FourthFitMode fourth_fit = FourthFitMode::basis5;
  FitTolerances tolerances;
  double min_abs_det = 0.05;  // near-singular mixing diagnostic threshold

  std::vector<double> theta_angles_rad() const;
  std::vector<double> phi_angles_rad() const;
};

struct OutputConfig {
  std::string directory = "out";
  bool scatter = true;
  bool moment_curves = true;
  bool eye = true;
  bool recovered = false;
  bool trial_summary = true;
  std::uint32_t eye_max_traces = 200;
};

// Full scenario description; the on-disk form is a JSON document with the
// same key layout (see the bundled .cfg files).
struct ScenarioConfig {
  std::string name;
  Seed seed;
  SoiSpec soi;
  InterferenceSpec interference;
  MixingMatrix mixing;
  PulseTrain sampler;
  DetectorConfig detector;
  BssConfig bss;
  OutputConfig outputs;
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);
std::string config_to_json(const ScenarioConfig& cfg);  // normalized echo
bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b);

// Throws sim_error(invalid_spec) on any violated invariant.
void validate_config(const ScenarioConfig& cfg);

}  // namespace pulsebss

#endif  // PULSEBSS_CONFIG_HPP
