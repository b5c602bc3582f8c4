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

#include "pulsebss/detector.hpp"

#include <cmath>
#include <limits>

#include "pulsebss/errors.hpp"
#include "pulsebss/rng.hpp"

namespace pulsebss {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double saturation_mw(const DetectorParams& d) {
  return dbm_to_mw(d.p_scw_dbm) * (d.t_fwhm_s / d.pulse_period_s);
}

double response_v_from_mw(double p_mw, const DetectorParams& d) {
  const double p_sp = saturation_mw(d);
  return d.slope_v_per_mw * p_sp * (-std::expm1(-p_mw / p_sp));
}

// Relative deviation of the saturating curve from its linear extrapolation.
double linearity_deviation(double p_mw, double p_sp_mw) {
  const double x = p_mw / p_sp_mw;
  if (x <= 0.0) return 0.0;
  return 1.0 - (-std::expm1(-x)) / x;
}
}  // namespace

void validate_detector(const DetectorParams& d) {
  if (!(d.t_fwhm_s > 0.0)) throw sim_error(errc::invalid_spec, "detector: t_fwhm must be positive");
  if (!(d.pulse_period_s > d.t_fwhm_s)) {
    throw sim_error(errc::invalid_spec, "detector: pulse period must exceed t_fwhm");
  }
  if (!(d.slope_v_per_mw > 0.0)) throw sim_error(errc::invalid_spec, "detector: slope must be positive");
  if (!(d.noise_sigma_v >= 0.0)) throw sim_error(errc::invalid_spec, "detector: noise must be non-negative");
  if (!std::isfinite(d.p_scw_dbm)) throw sim_error(errc::invalid_spec, "detector: p_scw must be finite");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double saturation_avg_power_dbm(const DetectorParams& d) {
  if (!(d.t_fwhm_s > 0.0) || !(d.pulse_period_s >= d.t_fwhm_s)) {
    throw sim_error(errc::invalid_spec, "detector: invalid t_fwhm / pulse period");
  }
  return d.p_scw_dbm + 10.0 * std::log10(d.t_fwhm_s / d.pulse_period_s);
}

double respond_noiseless_v(double avg_power_dbm, const DetectorParams& d) {
  if (std::isnan(avg_power_dbm) || avg_power_dbm == kInf) {
    throw sim_error(errc::invalid_spec, "respond: power must be finite or -inf");
  }
  return response_v_from_mw(dbm_to_mw(avg_power_dbm), d);
}

double respond(double avg_power_dbm, const DetectorParams& d, Seed seed) {
  CounterRng rng(seed, StreamTag::detector_respond);
  return respond_noiseless_v(avg_power_dbm, d) + d.noise_sigma_v * rng.gaussian_at(0);
}

double snr_analytic_db(double avg_power_dbm, const DetectorParams& d) {
  if (d.noise_sigma_v == 0.0) return kInf;
  return 10.0 * std::log10(respond_noiseless_v(avg_power_dbm, d) / d.noise_sigma_v);
}

std::vector<SnrPoint> snr_curve(const DetectorParams& d, const std::vector<double>& powers_dbm,
                                std::uint32_t n_repeats, Seed seed) {
  validate_detector(d);
  if (n_repeats < 100) throw sim_error(errc::invalid_spec, "snr_curve: n_repeats must be >= 100");

  std::vector<SnrPoint> out;
  out.reserve(powers_dbm.size());
  CounterRng rng(seed, StreamTag::detector_respond);
  std::uint64_t draw = 0;
  for (double p : powers_dbm) {
    const double v0 = respond_noiseless_v(p, d);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint32_t i = 0; i < n_repeats; ++i) {
      const double v = v0 + d.noise_sigma_v * rng.gaussian_at(draw++);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n_repeats;
    const double var = (sumsq - sum * sum / n_repeats) / (n_repeats - 1.0);
    const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
    double snr;
    if (sd == 0.0) {
      snr = kInf;
    } else if (mean <= 0.0) {
      snr = -kInf;
    } else {
      snr = 10.0 * std::log10(mean / sd);
    }
    out.push_back({p, mean, sd, snr});
  }
  return out;
}

LinearRange linear_range(const DetectorParams& d, double linearity_tol, double snr_floor_db,
                         const PowerGrid& grid) {
  validate_detector(d);
  if (!(linearity_tol > 0.0) || !(linearity_tol < 1.0)) {
    throw sim_error(errc::invalid_spec, "linear_range: tolerance must be in (0, 1)");
  }
  const double p_sp = saturation_mw(d);

  LinearRange r;
  bool have_upper = false, have_lower = false;
  const auto steps = static_cast<std::size_t>(std::llround((grid.max_dbm - grid.min_dbm) / grid.step_db));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double p_dbm = grid.min_dbm + static_cast<double>(i) * grid.step_db;
    if (linearity_deviation(dbm_to_mw(p_dbm), p_sp) <= linearity_tol) {
      if (!have_upper || p_dbm > r.upper_dbm) {
        r.upper_dbm = p_dbm;
        have_upper = true;
      }
    }
    if (!have_lower && snr_analytic_db(p_dbm, d) >= snr_floor_db) {
      r.lower_dbm = p_dbm;
      have_lower = true;
    }
  }
  if (!have_upper || !have_lower || r.upper_dbm < r.lower_dbm) {
    r.range_db = 0.0;
    r.empty = true;
    return r;
  }
  r.range_db = r.upper_dbm - r.lower_dbm;
  return r;
}

double linear_range_db(const DetectorParams& d, double linearity_tol, double snr_floor_db,
                       const PowerGrid& grid) {
  return linear_range(d, linearity_tol, snr_floor_db, grid).range_db;
}

DetectorParams calibrate_two_point(DetectorParams base, const std::vector<SnrAnchor>& anchors) {
  if (anchors.size() < 2) {
    throw sim_error(errc::invalid_spec, "calibrate_two_point: need at least two anchors");
  }
  // With V = slope * K(P), SNR_i/10 = log10(slope/sigma) + log10 K(P_i):
  // the anchors determine u = log10(slope/sigma) in weighted least
  // squares; slope is pinned at 1 V/mW by convention.
  base.slope_v_per_mw = 1.0;
  base.noise_sigma_v = 0.0;
  double wsum = 0.0, usum = 0.0;
  for (const auto& a : anchors) {
    const double k = respond_noiseless_v(a.power_dbm, base) / base.slope_v_per_mw;
    usum += a.weight * (a.snr_db / 10.0 - std::log10(k));
    wsum += a.weight;
  }
  const double u = usum / wsum;
  base.noise_sigma_v = base.slope_v_per_mw * std::pow(10.0, -u);
  return base;
}

double inverse_response_mw(double v, const DetectorParams& d) {
  const double p_sp = saturation_mw(d);
  const double vmax = d.slope_v_per_mw * p_sp;
  double ratio = v / vmax;
  if (ratio > 1.0 - 1e-12) ratio = 1.0 - 1e-12;
  return -p_sp * std::log1p(-ratio);
}

DetectorApplied apply_detector(const SampleStream& s, double input_avg_power_dbm,
                               const DetectorParams& d, Seed seed, bool inverse_correction,
                               std::uint64_t stream_salt) {
  validate_detector(d);
  const double p_op = dbm_to_mw(input_avg_power_dbm);
  const double v_center = respond_noiseless_v(input_avg_power_dbm, d);

  CounterRng rng(seed, StreamTag::detector_apply, stream_salt);
  DetectorApplied out;
  out.stream.times = s.times;
  out.stream.values.resize(s.values.size());
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    double v = s.values[k];
    if (v > 1.0 || v < -1.0) {
      v = v > 1.0 ? 1.0 : -1.0;
      ++out.clipped;
    }
    const double p = p_op * (1.0 + v);
    const double volts = response_v_from_mw(p, d) + d.noise_sigma_v * rng.gaussian_at(k);
    if (inverse_correction) {
      out.stream.values[k] = inverse_response_mw(volts, d) / p_op - 1.0;
    } else {
      out.stream.values[k] = volts - v_center;
    }
  }
  return out;
}

}  // namespace pulsebss
