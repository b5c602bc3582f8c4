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

#include "pulsebss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulsebss/csv.hpp"
#include "pulsebss/errors.hpp"

namespace pulsebss {

AlignResult align(const Waveform& recovered, const Waveform& reference) {
  validate_waveform(recovered, "align");
  validate_waveform(reference, "align");
  if (recovered.samples.size() != reference.samples.size() || recovered.dt != reference.dt) {
    throw sim_error(errc::shape_mismatch, "align: waveforms must share the grid");
  }
  double rr = 0.0, rx = 0.0;
  for (std::size_t k = 0; k < recovered.samples.size(); ++k) {
    rr += recovered.samples[k] * recovered.samples[k];
    rx += recovered.samples[k] * reference.samples[k];
  }
  if (rr == 0.0) throw sim_error(errc::degenerate, "align: recovered signal has zero energy");

  AlignResult res;
  res.gain = rx / rr;
  res.aligned.dt = recovered.dt;
  res.aligned.label = "aligned";
  res.aligned.samples.resize(recovered.samples.size());
  for (std::size_t k = 0; k < recovered.samples.size(); ++k) {
    res.aligned.samples[k] = res.gain * recovered.samples[k];
  }
  return res;
}

namespace {

// Average of the center half of bit k; `flag` reports a non-integer
// samples-per-bit ratio (nearest-sample selection then applies).
double mid_bit_average(const Waveform& w, double bit_period, std::uint64_t bit, bool* flag) {
  const double spb = bit_period / w.dt;
  if (flag && std::abs(spb - std::round(spb)) > 1e-9 * spb) *flag = true;
  const double t0 = (static_cast<double>(bit) + 0.25) * bit_period;
  const double t1 = (static_cast<double>(bit) + 0.75) * bit_period;
  auto i0 = static_cast<std::size_t>(std::llround(t0 / w.dt));
  auto i1 = static_cast<std::size_t>(std::llround(t1 / w.dt));
  i1 = std::min<std::size_t>(i1, w.samples.size() - 1);
  if (i0 > i1) i0 = i1;
  double acc = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) acc += w.samples[i];
  return acc / static_cast<double>(i1 - i0 + 1);
}

}  // namespace

BerResult ber(const Waveform& aligned, const std::vector<double>& reference_bits,
              double bit_period_s) {
  validate_waveform(aligned, "ber");
  if (!(bit_period_s > 0.0)) throw sim_error(errc::invalid_spec, "ber: bit period must be positive");
  if (reference_bits.empty()) throw sim_error(errc::empty_input, "ber: no reference bits");
  const double covered = aligned.duration();
  const auto n_bits = static_cast<std::uint64_t>(reference_bits.size());
  if (static_cast<double>(n_bits) * bit_period_s > covered * (1.0 + 1e-9)) {
    throw sim_error(errc::shape_mismatch, "ber: waveform does not cover all reference bits");
  }

  BerResult r;
  r.bits = n_bits;
  for (std::uint64_t k = 0; k < n_bits; ++k) {
    const double v = mid_bit_average(aligned, bit_period_s, k, &r.grid_flagged);
    const bool decided_high = v >= 0.0;
    const bool sent_high = reference_bits[k] >= 0.0;
    if (decided_high != sent_high) ++r.errors;
  }
  r.ber = static_cast<double>(r.errors) / static_cast<double>(r.bits);
  return r;
}

EyeData eye_data(const Waveform& w, double bit_period_s) {
  validate_waveform(w, "eye_data");
  if (!(bit_period_s > 0.0)) throw sim_error(errc::invalid_spec, "eye_data: bad bit period");
  const auto n_bits = static_cast<std::uint64_t>(w.duration() / bit_period_s);
  if (n_bits < 10) throw sim_error(errc::empty_input, "eye_data: need at least 10 bits");

  EyeData eye;
  eye.samples_per_bit = bit_period_s / w.dt;
  const auto span = static_cast<std::size_t>(std::llround(2.0 * eye.samples_per_bit));
  const std::uint64_t n_traces = n_bits / 2;
  eye.traces.reserve(n_traces);
  for (std::uint64_t r = 0; r < n_traces; ++r) {
    const auto start = static_cast<std::size_t>(std::llround(static_cast<double>(2 * r) * eye.samples_per_bit));
    if (start + span > w.samples.size()) break;
    eye.traces.emplace_back(w.samples.begin() + start, w.samples.begin() + start + span);
  }

  // Opening: classify each bit by the mean of its center half; a high bit
  // contributes its in-window minimum, a low bit its maximum.  Noise that
  // crosses zero inside the window drives the opening negative.
  double min_high = std::numeric_limits<double>::infinity();
  double max_low = -std::numeric_limits<double>::infinity();
  double sum_high = 0.0, sum_low = 0.0;
  std::uint64_t n_high = 0, n_low = 0;
  for (std::uint64_t k = 0; k < n_bits; ++k) {
    const double t0 = (static_cast<double>(k) + 0.25) * bit_period_s;
    const double t1 = (static_cast<double>(k) + 0.75) * bit_period_s;
    auto i0 = static_cast<std::size_t>(std::llround(t0 / w.dt));
    auto i1 = static_cast<std::size_t>(std::llround(t1 / w.dt));
    i1 = std::min<std::size_t>(i1, w.samples.size() - 1);
    if (i0 > i1) continue;
    double mean = 0.0, lo = w.samples[i0], hi = w.samples[i0];
    for (std::size_t i = i0; i <= i1; ++i) {
      mean += w.samples[i];
      lo = std::min(lo, w.samples[i]);
      hi = std::max(hi, w.samples[i]);
    }
    mean /= static_cast<double>(i1 - i0 + 1);
    if (mean >= 0.0) {
      min_high = std::min(min_high, lo);
      sum_high += mean;
      ++n_high;
    } else {
      max_low = std::max(max_low, hi);
      sum_low += mean;
      ++n_low;
    }
  }
  if (n_high == 0 || n_low == 0) {
    eye.opening = 0.0;
    return eye;
  }
  const double rail_sep = sum_high / n_high - sum_low / n_low;
  eye.opening = rail_sep > 0.0 ? (min_high - max_low) / rail_sep : 0.0;
  return eye;
}

double phi0_spread_deg(const std::vector<double>& phi0_deg) {
  if (phi0_deg.size() < 2) throw sim_error(errc::empty_input, "phi0_spread: need >= 2 trials");
  std::vector<double> v(phi0_deg.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::fmod(phi0_deg[i], 90.0);
    if (v[i] < 0.0) v[i] += 90.0;
  }
  std::sort(v.begin(), v.end());
  // Largest gap on the 90-degree circle; the spread is its complement.
  double max_gap = v.front() + 90.0 - v.back();
  for (std::size_t i = 1; i < v.size(); ++i) max_gap = std::max(max_gap, v[i] - v[i - 1]);
  return 90.0 - max_gap;
}

double phi0_spread_deg(const std::vector<TrialReport>& trials) {
  std::vector<double> v(trials.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = trials[i].phi0_deg;
  return phi0_spread_deg(v);
}

void export_scatter(const SampleStream& x1, const SampleStream& x2, const std::string& path) {
  if (x1.times != x2.times) {
    throw sim_error(errc::shape_mismatch, "export_scatter: streams must share the time grid");
  }
  CsvWriter out(path);
  out.row("t_s,x1,x2");
  for (std::size_t k = 0; k < x1.values.size(); ++k) {
    out.row(fmt_g(x1.times[k]) + "," + fmt_g(x1.values[k]) + "," + fmt_g(x2.values[k]));
  }
  out.close();
}

void export_moment_curve(const std::vector<double>& angles_deg, const std::vector<double>& measured,
                         const std::function<double(double)>& fitted, const std::string& path) {
  if (angles_deg.size() != measured.size()) {
    throw sim_error(errc::shape_mismatch, "export_moment_curve: angle/measurement size mismatch");
  }
  // Rows are the union of a 1-degree grid and the measured angles; the
  // measured column is filled only on measured rows.
  std::vector<std::pair<double, std::string>> rows;
  rows.reserve(angles_deg.size() + 180);
  for (int deg = 0; deg < 180; ++deg) rows.emplace_back(static_cast<double>(deg), std::string());
  for (std::size_t i = 0; i < angles_deg.size(); ++i) {
    rows.emplace_back(angles_deg[i], fmt_g(measured[i]));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  // A measured row replaces a grid row at the identical angle.
  CsvWriter out(path);
  out.row("angle_deg,measured,fitted");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i + 1 < rows.size() && rows[i + 1].first == rows[i].first && rows[i].second.empty()) {
      continue;
    }
    out.row(fmt_g(rows[i].first) + "," + rows[i].second + "," + fmt_g(fitted(rows[i].first)));
  }
  out.close();
}

void export_eye(const EyeData& eye, const std::string& path, std::size_t max_traces) {
  CsvWriter out(path);
  out.row("t_frac,trace_id,value");
  const std::size_t n = std::min(eye.traces.size(), max_traces);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < eye.traces[r].size(); ++i) {
      const double t_frac = static_cast<double>(i) / eye.samples_per_bit;
      out.row(fmt_g(t_frac) + "," + fmt_g(static_cast<double>(r)) + "," + fmt_g(eye.traces[r][i]));
    }
  }
  out.close();
}

void export_trial_summary(const std::vector<TrialReport>& trials, const std::string& path) {
  CsvWriter out(path);
  out.row("seed,phi0_deg,theta0_deg,ber,eye_opening,whiteness");
  for (const auto& t : trials) {
    out.row(std::to_string(t.seed) + "," + fmt_g(t.phi0_deg) + "," + fmt_g(t.theta0_deg) + "," +
            fmt_g(t.ber) + "," + fmt_g(t.eye_opening) + "," + fmt_g(t.whiteness_residual));
  }
  out.close();
}

}  // namespace pulsebss
