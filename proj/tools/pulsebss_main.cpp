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

#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pulsebss/csv.hpp"
#include "pulsebss/errors.hpp"
#include "pulsebss/harness.hpp"

namespace {

using namespace pulsebss;

int exit_code_for(const sim_error& e) {
  switch (e.code()) {
    case errc::io_error:
      return exit_io;
    case errc::invalid_spec:
    case errc::invalid_matrix:
      return exit_invalid_config;
    default:
      return exit_numerical;
  }
}

ScenarioConfig load(const std::string& config_path, std::optional<std::uint64_t> seed_override) {
  ScenarioConfig cfg = load_config(config_path);
  if (seed_override) cfg.seed.value = *seed_override;
  validate_config(cfg);
  return cfg;
}

void print_trial(const TrialReport& t) {
  std::printf("  seed=%llu theta0=%s deg phi0=%s deg ber=%s eye=%s snr=%s dB channel=%d\n",
              static_cast<unsigned long long>(t.seed), fmt_g(t.theta0_deg).c_str(),
              fmt_g(t.phi0_deg).c_str(), fmt_g(t.ber).c_str(), fmt_g(t.eye_opening).c_str(),
              fmt_g(t.snr_db).c_str(), t.soi_channel);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsebss: undersampled blind source separation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  std::size_t n_trials = 15;

  auto add_common = [&](CLI::App* cmd, bool with_out) {
    cmd->add_option("--config", config_path, "scenario config file")->required();
    if (with_out) cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "override the config seed");
  };

  CLI::App* cmd_run = app.add_subcommand("run", "run a single scenario");
  add_common(cmd_run, true);
  CLI::App* cmd_trials = app.add_subcommand("trials", "run a seeded trial batch");
  add_common(cmd_trials, true);
  cmd_trials->add_option("--n", n_trials, "number of trials")->check(CLI::PositiveNumber);
  CLI::App* cmd_det = app.add_subcommand("detector-curve", "sweep the detector response");
  add_common(cmd_det, true);
  CLI::App* cmd_gen = app.add_subcommand("gen", "emit waveforms only");
  add_common(cmd_gen, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid_config;
  }

  try {
    ScenarioConfig cfg = load(config_path, seed_override);
    const std::string dir = out_dir.empty() ? cfg.outputs.directory : out_dir;

    if (cmd_run->parsed()) {
      RunReport rep = run_scenario(cfg, dir);
      std::printf("scenario %s -> %s (%.2f s)\n", cfg.name.c_str(), dir.c_str(), rep.elapsed_s);
      for (const auto& t : rep.trials) print_trial(t);
      for (const auto& w : rep.warnings) std::printf("  warning: %s\n", w.c_str());
    } else if (cmd_trials->parsed()) {
      TrialsReport rep = run_trials(cfg, n_trials, dir);
      std::printf("trials %s: n=%zu failures=%zu phi0 spread=%s deg (%.2f s)\n", cfg.name.c_str(),
                  rep.trials.size(), rep.failures, fmt_g(rep.phi0_spread_deg).c_str(), rep.elapsed_s);
      for (const auto& t : rep.trials) print_trial(t);
    } else if (cmd_det->parsed()) {
      DetectorSweepReport rep = run_detector_sweep(cfg, dir);
      std::printf("detector sweep %s: saturation=%s dBm linear range=%s dB [%s, %s]\n",
                  cfg.name.c_str(), fmt_g(rep.saturation_dbm).c_str(),
                  fmt_g(rep.range.range_db).c_str(), fmt_g(rep.range.lower_dbm).c_str(),
                  fmt_g(rep.range.upper_dbm).c_str());
      if (rep.range.empty) std::printf("  warning: linear range is empty\n");
    } else if (cmd_gen->parsed()) {
      run_gen(cfg, dir);
      std::printf("waveforms written to %s\n", dir.c_str());
    }
  } catch (const sim_error& e) {
    std::fprintf(stderr, "error (%s): %s\n", errc_name(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_numerical;
  }
  return exit_ok;
}
