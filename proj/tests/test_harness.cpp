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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pulsebss/errors.hpp"
#include "pulsebss/harness.hpp"
#include "pulsebss/rng.hpp"

using namespace pulsebss;

namespace {

// Small, fast scenario used by the harness tests.
ScenarioConfig small_config() {
  ScenarioConfig cfg;
  cfg.name = "unit";
  cfg.seed.value = 31415;
  cfg.soi = SoiSpec{SoiKind::binary_nrz, 200e6, 10000, 32, 1.0};
  cfg.interference = InterferenceSpec{200e6, 2.0, 301};
  cfg.mixing = MixingMatrix{1.0, 0.5, 0.5, 1.0};
  cfg.sampler = PulseTrain{100e-9, 5e-9, PulseShape::rect, 22.5e-9};
  cfg.outputs.directory = "harness_tmp_out";
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config json round trip parses to an equal config") {
  const ScenarioConfig cfg = small_config();
  const std::string echo = config_to_json(cfg);
  const ScenarioConfig back = parse_config(echo);
  CHECK(config_equal(cfg, back));
  CHECK(back.name == "unit");
  CHECK(back.sampler.width_s == 5e-9);
}

TEST_CASE("config parser rejects unknown keys and bad enums") {
  CHECK_THROWS_AS(parse_config("{\"bogus\": 1}"), sim_error);
  CHECK_THROWS_AS(parse_config("{\"soi\": {\"kind\": \"fm\"}}"), sim_error);
  CHECK_THROWS_AS(parse_config("not json"), sim_error);
  CHECK_THROWS_AS(parse_config("{\"sampler\": {\"shape\": \"triangle\"}}"), sim_error);
}

TEST_CASE("config validation catches inconsistent scenarios") {
  ScenarioConfig cfg = small_config();
  cfg.interference.bandwidth = 10e9;  // above grid Nyquist
  CHECK_THROWS_AS(validate_config(cfg), sim_error);

  cfg = small_config();
  cfg.sampler.period_s = 1e-12;  // below the grid step
  CHECK_THROWS_AS(validate_config(cfg), sim_error);

  cfg = small_config();
  cfg.bss.n_phi = 4;  // basis5 needs 5
  CHECK_THROWS_AS(validate_config(cfg), sim_error);
  cfg.bss.fourth_fit = FourthFitMode::shared_phase4;
  CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("run_scenario writes artifacts and a reparsable report") {
  const ScenarioConfig cfg = small_config();
  const std::string dir = "harness_tmp_out/run1";
  const RunReport rep = run_scenario(cfg, dir);
  REQUIRE(rep.trials.size() == 1);
  CHECK(rep.trials[0].ber <= 1e-3);

  for (const char* name : {"scatter.csv", "moment2.csv", "moment4.csv", "eye.csv", "trial.csv",
                           "report.json"}) {
    CHECK(std::filesystem::exists(std::filesystem::path(dir) / name));
  }

  // the report's config echo reparses to the same config
  const std::string text = read_file(dir + "/report.json");
  const auto pos = text.find("\"config\"");
  REQUIRE(pos != std::string::npos);
  // cheap but effective: reparse the whole report as JSON via the config
  // parser on the embedded object
  const auto j_start = text.find('{', pos);
  int depth = 0;
  std::size_t j_end = j_start;
  for (std::size_t i = j_start; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}') {
      --depth;
      if (depth == 0) {
        j_end = i + 1;
        break;
      }
    }
  }
  const ScenarioConfig echoed = parse_config(text.substr(j_start, j_end - j_start));
  CHECK(config_equal(cfg, echoed));
}

TEST_CASE("run_scenario reruns are byte-identical") {
  const ScenarioConfig cfg = small_config();
  run_scenario(cfg, "harness_tmp_out/rep_a");
  run_scenario(cfg, "harness_tmp_out/rep_b");
  for (const char* name : {"scatter.csv", "moment2.csv", "moment4.csv", "eye.csv", "trial.csv",
                           "report.json"}) {
    CHECK(read_file(std::string("harness_tmp_out/rep_a/") + name) ==
          read_file(std::string("harness_tmp_out/rep_b/") + name));
  }
}

TEST_CASE("trials derive per-trial seeds and tolerate failures") {
  ScenarioConfig cfg = small_config();
  cfg.soi.n_bits = 4000;
  const TrialsReport rep = run_trials(cfg, 4, "harness_tmp_out/trials");
  CHECK(rep.trials.size() + rep.failures == 4);
  REQUIRE(rep.trials.size() >= 2);

  // trial i reproduces exactly under run_scenario with the derived seed
  ScenarioConfig single = cfg;
  single.seed = CounterRng::derive(cfg.seed, StreamTag::trial_seed, 1);
  const RunReport one = run_scenario(single, "harness_tmp_out/trial1");
  CHECK(one.trials[0].phi0_deg == rep.trials[1].phi0_deg);
  CHECK(one.trials[0].ber == rep.trials[1].ber);

  CHECK_THROWS_AS(run_trials(cfg, 1, "harness_tmp_out/trials_bad"), sim_error);
}

TEST_CASE("identical-seed trials produce identical reports") {
  ScenarioConfig cfg = small_config();
  cfg.soi.n_bits = 2000;
  const TrialsReport a = run_trials(cfg, 2, "harness_tmp_out/idem_a");
  const TrialsReport b = run_trials(cfg, 2, "harness_tmp_out/idem_b");
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].phi0_deg == b.trials[i].phi0_deg);
    CHECK(a.trials[i].ber == b.trials[i].ber);
  }
  CHECK(read_file("harness_tmp_out/idem_a/trials.csv") == read_file("harness_tmp_out/idem_b/trials.csv"));
}

TEST_CASE("detector sweep emits curve and range") {
  ScenarioConfig cfg = small_config();
  cfg.detector.params = calibrate_two_point(cfg.detector.params);
  cfg.detector.sweep_repeats = 200;
  const DetectorSweepReport rep = run_detector_sweep(cfg, "harness_tmp_out/det");
  CHECK(rep.saturation_dbm == doctest::Approx(-8.8).epsilon(0.01));
  CHECK(rep.range.range_db >= 30.0);
  const std::string text = read_file("harness_tmp_out/det/detector_curve.csv");
  CHECK(text.rfind("power_dbm,v_peak_mean,v_peak_std,snr_db\n", 0) == 0);

  // zero noise: sentinel rows
  cfg.detector.params.noise_sigma_v = 0.0;
  const DetectorSweepReport rep0 = run_detector_sweep(cfg, "harness_tmp_out/det0");
  CHECK(rep0.curve.front().snr_db == std::numeric_limits<double>::infinity());
  const std::string text0 = read_file("harness_tmp_out/det0/detector_curve.csv");
  CHECK(text0.find(",inf\n") != std::string::npos);
}

TEST_CASE("gen emits the four waveforms") {
  ScenarioConfig cfg = small_config();
  cfg.soi.n_bits = 100;
  run_gen(cfg, "harness_tmp_out/gen");
  for (const char* name : {"soi.csv", "interference.csv", "x1.csv", "x2.csv"}) {
    CHECK(std::filesystem::exists(std::filesystem::path("harness_tmp_out/gen") / name));
  }
}
