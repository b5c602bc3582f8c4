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

#include "pulsebss/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pulsebss/errors.hpp"

namespace pulsebss {

namespace {

using nlohmann::json;

constexpr double kDegToRad = 3.14159265358979323846264338328 / 180.0;

[[noreturn]] void bad(const std::string& what) { throw sim_error(errc::invalid_spec, "config: " + what); }

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) bad(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad value for '") + key + "'");
  }
}

std::vector<double> get_list(const json& j, const char* key) {
  std::vector<double> v;
  if (j.contains(key)) {
    if (!j.at(key).is_array()) bad(std::string("'") + key + "' must be an array");
    for (const auto& e : j.at(key)) v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace

std::vector<double> BssConfig::theta_angles_rad() const {
  std::vector<double> out;
  if (!theta_angles_deg.empty()) {
    for (double d : theta_angles_deg) out.push_back(d * kDegToRad);
  } else {
    out = equally_spaced_angles(n_theta);
  }
  return out;
}

std::vector<double> BssConfig::phi_angles_rad() const {
  std::vector<double> out;
  if (!phi_angles_deg.empty()) {
    for (double d : phi_angles_deg) out.push_back(d * kDegToRad);
  } else {
    out = equally_spaced_angles(n_phi);
  }
  return out;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }

  check_keys(j, "root",
             {"name", "seed", "soi", "interference", "mixing", "sampler", "detector", "bss", "outputs"});

  ScenarioConfig cfg;
  cfg.name = get_or<std::string>(j, "name", "scenario");
  cfg.seed.value = get_or<std::uint64_t>(j, "seed", 1);

  if (j.contains("soi")) {
    const auto& s = j.at("soi");
    check_keys(s, "soi", {"kind", "bit_rate", "n_bits", "samples_per_bit", "amplitude"});
    const std::string kind = get_or<std::string>(s, "kind", "binary_nrz");
    if (kind == "binary_nrz") {
      cfg.soi.kind = SoiKind::binary_nrz;
    } else if (kind == "qam16_real") {
      cfg.soi.kind = SoiKind::qam16_real;
    } else {
      bad("soi.kind must be binary_nrz or qam16_real");
    }
    cfg.soi.bit_rate = get_or<double>(s, "bit_rate", 0.0);
    cfg.soi.n_bits = get_or<std::uint64_t>(s, "n_bits", 0);
    cfg.soi.samples_per_bit = get_or<std::uint32_t>(s, "samples_per_bit", 1);
    cfg.soi.amplitude = get_or<double>(s, "amplitude", 1.0);
  }

  if (j.contains("interference")) {
    const auto& s = j.at("interference");
    check_keys(s, "interference", {"bandwidth", "rms", "filter_taps"});
    cfg.interference.bandwidth = get_or<double>(s, "bandwidth", 0.0);
    cfg.interference.rms = get_or<double>(s, "rms", 0.0);
    cfg.interference.filter_taps = get_or<std::uint32_t>(s, "filter_taps", 601);
  }

  if (j.contains("mixing")) {
    const auto& s = j.at("mixing");
    check_keys(s, "mixing", {"a11", "a12", "a21", "a22"});
    cfg.mixing.a11 = get_or<double>(s, "a11", 1.0);
    cfg.mixing.a12 = get_or<double>(s, "a12", 0.0);
    cfg.mixing.a21 = get_or<double>(s, "a21", 0.0);
    cfg.mixing.a22 = get_or<double>(s, "a22", 1.0);
  }

  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    check_keys(s, "sampler", {"period_s", "width_s", "shape", "offset_s"});
    cfg.sampler.period_s = get_or<double>(s, "period_s", 0.0);
    cfg.sampler.width_s = get_or<double>(s, "width_s", 0.0);
    cfg.sampler.offset_s = get_or<double>(s, "offset_s", 0.0);
    const std::string shape = get_or<std::string>(s, "shape", "rect");
    if (shape == "rect") {
      cfg.sampler.shape = PulseShape::rect;
    } else if (shape == "gaussian_fwhm") {
      cfg.sampler.shape = PulseShape::gaussian_fwhm;
    } else {
      bad("sampler.shape must be rect or gaussian_fwhm");
    }
  }

  if (j.contains("detector")) {
    const auto& s = j.at("detector");
    check_keys(s, "detector",
               {"enabled", "p_scw_dbm", "t_fwhm_s", "pulse_period_s", "slope_v_per_mw",
                "noise_sigma_v", "inverse_correction", "avg_power_dbm", "sweep_min_dbm",
                "sweep_max_dbm", "sweep_step_db", "sweep_repeats", "linearity_tol", "snr_floor_db"});
    cfg.detector.enabled = get_or<bool>(s, "enabled", false);
    cfg.detector.params.p_scw_dbm = get_or<double>(s, "p_scw_dbm", 16.0);
    cfg.detector.params.t_fwhm_s = get_or<double>(s, "t_fwhm_s", 90e-12);
    cfg.detector.params.pulse_period_s = get_or<double>(s, "pulse_period_s", 1.0 / 37e6);
    cfg.detector.params.slope_v_per_mw = get_or<double>(s, "slope_v_per_mw", 1.0);
    cfg.detector.params.noise_sigma_v = get_or<double>(s, "noise_sigma_v", 1.2166e-5);
    cfg.detector.inverse_correction = get_or<bool>(s, "inverse_correction", false);
    cfg.detector.avg_power_dbm = get_or<double>(s, "avg_power_dbm", -20.0);
    cfg.detector.sweep_min_dbm = get_or<double>(s, "sweep_min_dbm", -50.0);
    cfg.detector.sweep_max_dbm = get_or<double>(s, "sweep_max_dbm", 0.0);
    cfg.detector.sweep_step_db = get_or<double>(s, "sweep_step_db", 0.5);
    cfg.detector.sweep_repeats = get_or<std::uint32_t>(s, "sweep_repeats", 1000);
    cfg.detector.linearity_tol = get_or<double>(s, "linearity_tol", 0.1);
    cfg.detector.snr_floor_db = get_or<double>(s, "snr_floor_db", 1.0);
  }

  if (j.contains("bss")) {
    const auto& s = j.at("bss");
    check_keys(s, "bss",
               {"theta_angles_deg", "phi_angles_deg", "n_theta", "n_phi", "fourth_fit", "tolerances",
                "min_abs_det"});
    cfg.bss.theta_angles_deg = get_list(s, "theta_angles_deg");
    cfg.bss.phi_angles_deg = get_list(s, "phi_angles_deg");
    cfg.bss.n_theta = get_or<std::uint32_t>(s, "n_theta", 6);
    cfg.bss.n_phi = get_or<std::uint32_t>(s, "n_phi", 8);
    const std::string mode = get_or<std::string>(s, "fourth_fit", "basis5");
    if (mode == "basis5") {
      cfg.bss.fourth_fit = FourthFitMode::basis5;
    } else if (mode == "shared_phase4") {
      cfg.bss.fourth_fit = FourthFitMode::shared_phase4;
    } else {
      bad("bss.fourth_fit must be basis5 or shared_phase4");
    }
    if (s.contains("tolerances")) {
      const auto& t = s.at("tolerances");
      check_keys(t, "bss.tolerances",
                 {"condition_max", "isotropic_rel", "fourth_harmonic_rel", "second_harmonic_rel",
                  "kurtosis_ambiguity", "whiteness"});
      cfg.bss.tolerances.condition_max = get_or<double>(t, "condition_max", 1e8);
      cfg.bss.tolerances.isotropic_rel = get_or<double>(t, "isotropic_rel", 0.01);
      cfg.bss.tolerances.fourth_harmonic_rel = get_or<double>(t, "fourth_harmonic_rel", 0.005);
      cfg.bss.tolerances.second_harmonic_rel = get_or<double>(t, "second_harmonic_rel", 0.02);
      cfg.bss.tolerances.kurtosis_ambiguity = get_or<double>(t, "kurtosis_ambiguity", 0.2);
    }
    cfg.bss.min_abs_det = get_or<double>(s, "min_abs_det", 0.05);
  }

  if (j.contains("outputs")) {
    const auto& s = j.at("outputs");
    check_keys(s, "outputs",
               {"directory", "scatter", "moment_curves", "eye", "recovered", "trial_summary",
                "eye_max_traces"});
    cfg.outputs.directory = get_or<std::string>(s, "directory", "out");
    cfg.outputs.scatter = get_or<bool>(s, "scatter", true);
    cfg.outputs.moment_curves = get_or<bool>(s, "moment_curves", true);
    cfg.outputs.eye = get_or<bool>(s, "eye", true);
    cfg.outputs.recovered = get_or<bool>(s, "recovered", false);
    cfg.outputs.trial_summary = get_or<bool>(s, "trial_summary", true);
    cfg.outputs.eye_max_traces = get_or<std::uint32_t>(s, "eye_max_traces", 200);
  }

  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sim_error(errc::io_error, "cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["seed"] = cfg.seed.value;
  j["soi"] = {{"kind", cfg.soi.kind == SoiKind::binary_nrz ? "binary_nrz" : "qam16_real"},
              {"bit_rate", cfg.soi.bit_rate},
              {"n_bits", cfg.soi.n_bits},
              {"samples_per_bit", cfg.soi.samples_per_bit},
              {"amplitude", cfg.soi.amplitude}};
  j["interference"] = {{"bandwidth", cfg.interference.bandwidth},
                       {"rms", cfg.interference.rms},
                       {"filter_taps", cfg.interference.filter_taps}};
  j["mixing"] = {{"a11", cfg.mixing.a11}, {"a12", cfg.mixing.a12}, {"a21", cfg.mixing.a21}, {"a22", cfg.mixing.a22}};
  j["sampler"] = {{"period_s", cfg.sampler.period_s},
                  {"width_s", cfg.sampler.width_s},
                  {"shape", cfg.sampler.shape == PulseShape::rect ? "rect" : "gaussian_fwhm"},
                  {"offset_s", cfg.sampler.offset_s}};
  j["detector"] = {{"enabled", cfg.detector.enabled},
                   {"p_scw_dbm", cfg.detector.params.p_scw_dbm},
                   {"t_fwhm_s", cfg.detector.params.t_fwhm_s},
                   {"pulse_period_s", cfg.detector.params.pulse_period_s},
                   {"slope_v_per_mw", cfg.detector.params.slope_v_per_mw},
                   {"noise_sigma_v", cfg.detector.params.noise_sigma_v},
                   {"inverse_correction", cfg.detector.inverse_correction},
                   {"avg_power_dbm", cfg.detector.avg_power_dbm},
                   {"sweep_min_dbm", cfg.detector.sweep_min_dbm},
                   {"sweep_max_dbm", cfg.detector.sweep_max_dbm},
                   {"sweep_step_db", cfg.detector.sweep_step_db},
                   {"sweep_repeats", cfg.detector.sweep_repeats},
                   {"linearity_tol", cfg.detector.linearity_tol},
                   {"snr_floor_db", cfg.detector.snr_floor_db}};
  j["bss"] = {{"theta_angles_deg", cfg.bss.theta_angles_deg},
              {"phi_angles_deg", cfg.bss.phi_angles_deg},
              {"n_theta", cfg.bss.n_theta},
              {"n_phi", cfg.bss.n_phi},
              {"fourth_fit", cfg.bss.fourth_fit == FourthFitMode::basis5 ? "basis5" : "shared_phase4"},
              {"tolerances",
               {{"condition_max", cfg.bss.tolerances.condition_max},
                {"isotropic_rel", cfg.bss.tolerances.isotropic_rel},
                {"fourth_harmonic_rel", cfg.bss.tolerances.fourth_harmonic_rel},
                {"second_harmonic_rel", cfg.bss.tolerances.second_harmonic_rel},
                {"kurtosis_ambiguity", cfg.bss.tolerances.kurtosis_ambiguity}}},
              {"min_abs_det", cfg.bss.min_abs_det}};
  j["outputs"] = {{"directory", cfg.outputs.directory},
                  {"scatter", cfg.outputs.scatter},
                  {"moment_curves", cfg.outputs.moment_curves},
                  {"eye", cfg.outputs.eye},
                  {"recovered", cfg.outputs.recovered},
                  {"trial_summary", cfg.outputs.trial_summary},
                  {"eye_max_traces", cfg.outputs.eye_max_traces}};
  return j.dump(2);
}

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b) {
  return json::parse(config_to_json(a)) == json::parse(config_to_json(b));
}

void validate_config(const ScenarioConfig& cfg) {
  if (!(cfg.soi.bit_rate > 0.0)) bad("soi.bit_rate must be positive");
  if (cfg.soi.n_bits < 1) bad("soi.n_bits must be >= 1");
  if (cfg.soi.samples_per_bit < 1) bad("soi.samples_per_bit must be >= 1");
  const double dt = 1.0 / (cfg.soi.bit_rate * cfg.soi.samples_per_bit);
  if (cfg.interference.rms > 0.0) {
    if (!(cfg.interference.bandwidth > 0.0) || cfg.interference.bandwidth > 0.5 / dt * (1.0 + 1e-12)) {
      bad("interference.bandwidth must be in (0, Nyquist] of the grid");
    }
  }
  validate_mixing(cfg.mixing);
  validate_pulse_train(cfg.sampler);
  if (cfg.sampler.period_s < dt) bad("sampler.period_s below the waveform grid step");
  if (cfg.detector.enabled) validate_detector(cfg.detector.params);
  const std::size_t min_phi = cfg.bss.fourth_fit == FourthFitMode::basis5 ? 5 : 4;
  if (cfg.bss.theta_angles_rad().size() < 3) bad("bss: need >= 3 theta angles");
  if (cfg.bss.phi_angles_rad().size() < min_phi) bad("bss: too few phi angles for fourth_fit mode");
}

}  // namespace pulsebss
