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

#include "pulsebss/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "pulsebss/csv.hpp"
#include "pulsebss/errors.hpp"
#include "pulsebss/rng.hpp"

namespace pulsebss {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846264338328;

class ArtifactSink {
 public:
  explicit ArtifactSink(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw sim_error(errc::io_error, "cannot create output directory: " + dir);
  }

  std::string path(const std::string& name) {
    const std::string p = (fs::path(dir_) / name).string();
    written_.push_back(p);
    return p;
  }

  // Partial outputs are removed when a run aborts.
  void discard_all() {
    for (const auto& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    written_.clear();
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  std::string dir_;
  std::vector<std::string> written_;
};

void write_waveform_csv(const Waveform& w, const std::string& path) {
  CsvWriter out(path);
  out.row("t_s,value");
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    out.row(fmt_g(w.time_at(i)) + "," + fmt_g(w.samples[i]));
  }
  out.close();
}

json trial_to_json(const TrialReport& t) {
  return json{{"seed", t.seed},
              {"phi0_deg", t.phi0_deg},
              {"theta0_deg", t.theta0_deg},
              {"ber", std::isnan(t.ber) ? json() : json(t.ber)},
              {"snr_db", t.snr_db},
              {"whiteness_residual", t.whiteness_residual},
              {"soi_channel", t.soi_channel},
              {"kurtosis", {t.kurtosis_soi, t.kurtosis_other}},
              {"eye_opening", t.eye_opening}};
}

void write_report_json(const std::string& path, const ScenarioConfig& cfg,
                       const std::vector<TrialReport>& trials,
                       const std::vector<std::string>& warnings, const json& extra) {
  json j;
  j["version"] = kVersion;
  j["config"] = json::parse(config_to_json(cfg));
  j["warnings"] = warnings;
  json jt = json::array();
  for (const auto& t : trials) jt.push_back(trial_to_json(t));
  j["trials"] = jt;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = *it;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sim_error(errc::io_error, "cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw sim_error(errc::io_error, "write failed: " + path);
}

struct ScenarioRun {
  TrialReport trial;
  SeparationResult separation;
  SampleStream s1, s2;  // raw sampled mixtures (for scatter export)
  Waveform soi;
  Waveform aligned;
  std::vector<std::string> warnings;
};

// The deterministic pipeline shared by run_scenario and run_trials.
ScenarioRun execute(const ScenarioConfig& cfg, Seed seed) {
  ScenarioRun run;

  Waveform soi = gen_soi(cfg.soi, seed);
  const std::vector<double> symbols = gen_soi_symbols(cfg.soi, seed);
  const Waveform interf = gen_interference(cfg.interference, soi.duration(), soi.dt, seed);

  if (cfg.mixing.near_singular(cfg.bss.min_abs_det)) {
    run.warnings.push_back("mixing matrix is near-singular (|det| below threshold)");
  }
  auto [x1, x2] = mix(soi, interf, cfg.mixing);

  SeparationOptions opts;
  opts.theta_angles = cfg.bss.theta_angles_rad();
  opts.phi_angles = cfg.bss.phi_angles_rad();
  opts.fourth_mode = cfg.bss.fourth_fit;
  opts.tolerances = cfg.bss.tolerances;
  if (cfg.detector.enabled) {
    opts.detector = DetectorStage{cfg.detector.params, cfg.detector.avg_power_dbm,
                                  cfg.detector.inverse_correction, seed};
  }
  run.separation = separate(x1, x2, cfg.sampler, opts);
  run.s1 = sample(x1, cfg.sampler);
  run.s2 = sample(x2, cfg.sampler);

  auto [y1, y2] = apply_demix(run.separation.demixer, x1, x2);
  const Waveform& recovered = run.separation.demixer.soi_channel == 1 ? y1 : y2;

  AlignResult al = align(recovered, soi);

  TrialReport& t = run.trial;
  t.seed = seed.value;
  t.phi0_deg = run.separation.fourth_fit.phi0 * kRadToDeg;
  t.theta0_deg = run.separation.second_fit.theta0 * kRadToDeg;
  t.whiteness_residual = run.separation.whiteness_residual;
  t.soi_channel = run.separation.demixer.soi_channel;
  t.kurtosis_soi = run.separation.demixer.soi_kurtosis;
  t.kurtosis_other = run.separation.demixer.other_kurtosis;

  const double bit_period = 1.0 / cfg.soi.bit_rate;
  if (cfg.soi.kind == SoiKind::binary_nrz) {
    t.ber = ber(al.aligned, symbols, bit_period).ber;
  } else {
    t.ber = std::nan("");  // symbol metrics only for the 4-level source
  }
  t.eye_opening = eye_data(al.aligned, bit_period).opening;

  double ref_energy = 0.0, err_energy = 0.0;
  for (std::size_t k = 0; k < soi.samples.size(); ++k) {
    ref_energy += soi.samples[k] * soi.samples[k];
    const double e = al.aligned.samples[k] - soi.samples[k];
    err_energy += e * e;
  }
  t.snr_db = err_energy > 0.0 ? 10.0 * std::log10(ref_energy / err_energy)
                              : std::numeric_limits<double>::infinity();

  run.soi = std::move(soi);
  run.aligned = std::move(al.aligned);
  for (const auto& w : run.separation.warnings) run.warnings.push_back(w);
  return run;
}

void write_scenario_artifacts(const ScenarioConfig& cfg, const ScenarioRun& run, ArtifactSink& sink) {
  if (cfg.outputs.scatter) {
    export_scatter(run.s1, run.s2, sink.path("scatter.csv"));
  }
  if (cfg.outputs.moment_curves) {
    const auto& f2 = run.separation.second_fit;
    const auto thetas = cfg.bss.theta_angles_rad();
    std::vector<double> theta_deg(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) theta_deg[i] = thetas[i] * kRadToDeg;
    export_moment_curve(
        theta_deg, run.separation.theta_moments,
        [&](double deg) {
          const double a = deg / kRadToDeg;
          return f2.q1 + f2.q2 * std::cos(2.0 * (a - f2.theta0));
        },
        sink.path("moment2.csv"));

    const auto& f4 = run.separation.fourth_fit;
    const auto phis = cfg.bss.phi_angles_rad();
    std::vector<double> phi_deg(phis.size());
    for (std::size_t i = 0; i < phis.size(); ++i) phi_deg[i] = phis[i] * kRadToDeg;
    export_moment_curve(
        phi_deg, run.separation.phi_moments,
        [&](double deg) {
          const double a = deg / kRadToDeg;
          return f4.p1 + f4.p2 * std::cos(2.0 * (a - f4.phi0)) + f4.p3 * std::cos(4.0 * (a - f4.phi0));
        },
        sink.path("moment4.csv"));
  }
  if (cfg.outputs.eye) {
    export_eye(eye_data(run.aligned, 1.0 / cfg.soi.bit_rate), sink.path("eye.csv"),
               cfg.outputs.eye_max_traces);
  }
  if (cfg.outputs.recovered) {
    write_waveform_csv(run.aligned, sink.path("recovered.csv"));
  }
  if (cfg.outputs.trial_summary) {
    export_trial_summary({run.trial}, sink.path("trial.csv"));
  }
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  ArtifactSink sink(out_dir);
  RunReport report;
  report.config = cfg;
  try {
    ScenarioRun run = execute(cfg, cfg.seed);
    report.trials.push_back(run.trial);
    report.warnings = run.warnings;
    write_scenario_artifacts(cfg, run, sink);
    write_report_json(sink.path("report.json"), cfg, report.trials, report.warnings, json::object());
  } catch (...) {
    sink.discard_all();
    throw;
  }
  report.artifacts = sink.written();
  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

TrialsReport run_trials(const ScenarioConfig& cfg, std::size_t n, const std::string& out_dir) {
  validate_config(cfg);
  if (n < 2) throw sim_error(errc::invalid_spec, "run_trials: need n >= 2");
  const auto t_start = std::chrono::steady_clock::now();

  ArtifactSink sink(out_dir);
  TrialsReport report;
  report.config = cfg;
  std::vector<std::string> warnings;
  try {
    for (std::size_t i = 0; i < n; ++i) {
      const Seed trial_seed = CounterRng::derive(cfg.seed, StreamTag::trial_seed, i);
      try {
        ScenarioRun run = execute(cfg, trial_seed);
        report.trials.push_back(run.trial);
      } catch (const sim_error& e) {
        ++report.failures;
        warnings.push_back("trial " + std::to_string(i) + " failed: " + e.what());
      }
    }
    if (report.trials.size() >= 2) {
      report.phi0_spread_deg = phi0_spread_deg(report.trials);
    }
    export_trial_summary(report.trials, sink.path("trials.csv"));
    write_report_json(sink.path("trials_report.json"), cfg, report.trials, warnings,
                      json{{"phi0_spread_deg", report.phi0_spread_deg},
                           {"n_requested", n},
                           {"failures", report.failures}});
  } catch (...) {
    sink.discard_all();
    throw;
  }
  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

DetectorSweepReport run_detector_sweep(const ScenarioConfig& cfg, const std::string& out_dir) {
  validate_detector(cfg.detector.params);
  const auto& dc = cfg.detector;
  if (!(dc.sweep_step_db > 0.0) || dc.sweep_max_dbm < dc.sweep_min_dbm) {
    throw sim_error(errc::invalid_spec, "detector sweep: bad power grid");
  }

  DetectorSweepReport rep;
  rep.saturation_dbm = saturation_avg_power_dbm(dc.params);
  rep.range = linear_range(dc.params, dc.linearity_tol, dc.snr_floor_db);

  std::vector<double> powers;
  for (double p = dc.sweep_min_dbm; p <= dc.sweep_max_dbm + 1e-9; p += dc.sweep_step_db) {
    powers.push_back(p);
  }
  rep.curve = snr_curve(dc.params, powers, dc.sweep_repeats, cfg.seed);

  ArtifactSink sink(out_dir);
  try {
    CsvWriter out(sink.path("detector_curve.csv"));
    out.row("power_dbm,v_peak_mean,v_peak_std,snr_db");
    for (const auto& p : rep.curve) {
      out.row(fmt_g(p.power_dbm) + "," + fmt_g(p.v_peak_mean) + "," + fmt_g(p.v_peak_std) + "," +
              fmt_g(p.snr_db));
    }
    out.close();

    json extra{{"saturation_avg_power_dbm", rep.saturation_dbm},
               {"linear_range_db", rep.range.range_db},
               {"linear_range_lower_dbm", rep.range.lower_dbm},
               {"linear_range_upper_dbm", rep.range.upper_dbm},
               {"linear_range_empty", rep.range.empty}};
    write_report_json(sink.path("detector_report.json"), cfg, {}, {}, extra);
  } catch (...) {
    sink.discard_all();
    throw;
  }
  return rep;
}

void run_gen(const ScenarioConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);
  ArtifactSink sink(out_dir);
  try {
    const Waveform soi = gen_soi(cfg.soi, cfg.seed);
    const Waveform interf = gen_interference(cfg.interference, soi.duration(), soi.dt, cfg.seed);
    auto [x1, x2] = mix(soi, interf, cfg.mixing);
    write_waveform_csv(soi, sink.path("soi.csv"));
    write_waveform_csv(interf, sink.path("interference.csv"));
    write_waveform_csv(x1, sink.path("x1.csv"));
    write_waveform_csv(x2, sink.path("x2.csv"));
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

}  // namespace pulsebss
