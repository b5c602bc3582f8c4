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

#ifndef PULSEBSS_HARNESS_HPP
#define PULSEBSS_HARNESS_HPP

#include <string>
#include <vector>

#include "pulsebss/config.hpp"
#include "pulsebss/metrics.hpp"

namespace pulsebss {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes of the CLI contract.
enum ExitCode : int {
  exit_ok = 0,
  exit_invalid_config = 2,
  exit_numerical = 3,
  exit_io = 4,
};

struct RunReport {
  ScenarioConfig config;
  std::vector<TrialReport> trials;
  std::vector<std::string> warnings;
  std::string version = kVersion;
  double elapsed_s = 0.0;  // console-only; not serialized (reports stay byte-stable)
  std::vector<std::string> artifacts;  // paths written
};

// One seeded end-to-end run: synthesize, mix, pulse-sample (optionally
// through the detector), learn the demixer from sampled statistics, apply
// it at full rate, score the recovery, write enabled artifacts under
// out_dir.  Any stage error removes partial artifacts and rethrows with
// the stage name.
RunReport run_scenario(const ScenarioConfig& cfg, const std::string& out_dir);

struct TrialsReport {
  ScenarioConfig config;
  std::vector<TrialReport> trials;
  std::size_t failures = 0;
  double phi0_spread_deg = 0.0;
  std::string version = kVersion;
  double elapsed_s = 0.0;
};

// n runs with per-trial derived seeds; per-trial failures are counted and
// the batch continues.  Results do not depend on execution order.
TrialsReport run_trials(const ScenarioConfig& cfg, std::size_t n, const std::string& out_dir);

struct DetectorSweepReport {
  double saturation_dbm = 0.0;
  LinearRange range;
  std::vector<SnrPoint> curve;
};

// Emits the response/SNR sweep CSV plus computed saturation power and
// linear range.
DetectorSweepReport run_detector_sweep(const ScenarioConfig& cfg, const std::string& out_dir);

// Waveform emission only (soi, interference, x1, x2).
void run_gen(const ScenarioConfig& cfg, const std::string& out_dir);

}  // namespace pulsebss

#endif  // PULSEBSS_HARNESS_HPP
