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

#include "pulsebss/bss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pulsebss/errors.hpp"

namespace pulsebss {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kHalfPi = 0.5 * kPi;
constexpr double kQuarterPi = 0.25 * kPi;

// Least squares through the normal equations for k <= 5 parameters.
// Rank loss (aliased angles) shows up as pivot collapse.
template <std::size_t K>
std::array<double, K> solve_least_squares(const std::vector<std::array<double, K>>& rows,
                                          const std::vector<double>& y, double cond_max,
                                          const char* who) {
  double normal[K][K] = {};
  std::array<double, K> rhs{};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < K; ++i) {
      rhs[i] += rows[r][i] * y[r];
      for (std::size_t j = i; j < K; ++j) normal[i][j] += rows[r][i] * rows[r][j];
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < i; ++j) normal[i][j] = normal[j][i];
  }

  double scale = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) scale = std::max(scale, std::abs(normal[i][j]));
  }
  if (scale == 0.0) throw sim_error(errc::ill_posed, std::string(who) + ": empty design");

  // Gaussian elimination with partial pivoting.
  std::array<std::size_t, K> perm{};
  for (std::size_t i = 0; i < K; ++i) perm[i] = i;
  for (std::size_t col = 0; col < K; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < K; ++r) {
      if (std::abs(normal[perm[r]][col]) > std::abs(normal[perm[best]][col])) best = r;
    }
    std::swap(perm[col], perm[best]);
    const double pivot = normal[perm[col]][col];
    if (std::abs(pivot) < scale / cond_max) {
      throw sim_error(errc::ill_posed, std::string(who) + ": angles alias; design is rank-deficient");
    }
    for (std::size_t r = col + 1; r < K; ++r) {
      const double f = normal[perm[r]][col] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = col; j < K; ++j) normal[perm[r]][j] -= f * normal[perm[col]][j];
      rhs[perm[r]] -= f * rhs[perm[col]];
    }
  }
  std::array<double, K> x{};
  for (std::size_t i = K; i-- > 0;) {
    double acc = rhs[perm[i]];
    for (std::size_t j = i + 1; j < K; ++j) acc -= normal[perm[i]][j] * x[j];
    x[i] = acc / normal[perm[i]][i];
  }
  return x;
}

double wrap_to(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  return r;
}

double moment_mean(const SampleStream& s, int power, const char* who) {
  if (s.values.size() < 2) {
    throw sim_error(errc::empty_input, std::string(who) + ": need at least 2 samples");
  }
  double acc = 0.0;
  if (power == 2) {
    for (double v : s.values) acc += v * v;
  } else {
    for (double v : s.values) {
      const double v2 = v * v;
      acc += v2 * v2;
    }
  }
  return acc / static_cast<double>(s.values.size());
}

Mat2 rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

struct SharedPhaseSolution {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;  // signed amplitudes
  double rss = std::numeric_limits<double>::infinity();
};

SharedPhaseSolution solve_shared_phase(const std::vector<double>& angles,
                                       const std::vector<double>& moments, double phi0,
                                       double cond_max) {
  std::vector<std::array<double, 3>> rows(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    rows[i] = {1.0, std::cos(2.0 * (angles[i] - phi0)), std::cos(4.0 * (angles[i] - phi0))};
  }
  SharedPhaseSolution sol;
  std::array<double, 3> c{};
  try {
    c = solve_least_squares<3>(rows, moments, cond_max, "fit_fourth");
  } catch (const sim_error&) {
    return sol;  // rss stays +inf for this phase
  }
  sol.p1 = c[0];
  sol.p2 = c[1];
  sol.p3 = c[2];
  sol.rss = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double fitted = c[0] * rows[i][0] + c[1] * rows[i][1] + c[2] * rows[i][2];
    const double r = moments[i] - fitted;
    sol.rss += r * r;
  }
  return sol;
}

// Golden-section minimum of the shared-phase residual near a bracketing
// interval; the residual is smooth, so this converges to fp precision.
double refine_shared_phase(const std::vector<double>& angles, const std::vector<double>& moments,
                           double lo, double hi, double cond_max) {
  constexpr double kGolden = 0.61803398874989484820458683437;
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = solve_shared_phase(angles, moments, x1, cond_max).rss;
  double f2 = solve_shared_phase(angles, moments, x2, cond_max).rss;
  for (int it = 0; it < 120 && (b - a) > 1e-15; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = solve_shared_phase(angles, moments, x1, cond_max).rss;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = solve_shared_phase(angles, moments, x2, cond_max).rss;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SampleStream weighted_mix(const SampleStream& x1, const SampleStream& x2, double angle) {
  if (x1.times.size() != x2.times.size() || x1.values.size() != x2.values.size() ||
      x1.times != x2.times) {
    throw sim_error(errc::shape_mismatch, "weighted_mix: streams must share the time grid");
  }
  const double c = std::cos(angle), s = std::sin(angle);
  SampleStream out;
  out.times = x1.times;
  out.values.resize(x1.values.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = c * x1.values[k] + s * x2.values[k];
  }
  return out;
}

double second_moment(const SampleStream& s) { return moment_mean(s, 2, "second_moment"); }
double fourth_moment(const SampleStream& s) { return moment_mean(s, 4, "fourth_moment"); }

double stream_kurtosis(const SampleStream& s) {
  const double m2 = second_moment(s);
  if (m2 == 0.0) throw sim_error(errc::degenerate, "kurtosis: zero-power stream");
  return fourth_moment(s) / (m2 * m2);
}

SecondMomentFit fit_second(const std::vector<double>& angles, const std::vector<double>& moments,
                           const FitTolerances& tol) {
  if (angles.size() != moments.size() || angles.size() < 3) {
    throw sim_error(errc::ill_posed, "fit_second: need >= 3 (angle, moment) pairs");
  }
  std::vector<std::array<double, 3>> rows(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) {
    rows[i] = {1.0, std::cos(2.0 * angles[i]), std::sin(2.0 * angles[i])};
  }
  const auto c = solve_least_squares<3>(rows, moments, tol.condition_max, "fit_second");

  SecondMomentFit f;
  f.q1 = c[0];
  f.q2 = std::hypot(c[1], c[2]);
  f.theta0 = wrap_to(0.5 * std::atan2(c[2], c[1]), kPi);
  if (f.q1 < f.q2) {
    throw sim_error(errc::degenerate_fit,
                    "fit_second: q1 < |q2|; curve is not a valid covariance section");
  }
  if (f.q2 <= tol.isotropic_rel * f.q1) {
    throw sim_error(errc::isotropic_mixture, "fit_second: no anisotropy; theta0 undefined");
  }
  return f;
}

Whitener pca_whitener(const SecondMomentFit& f) {
  if (!(f.q1 > 0.0) || f.q2 < 0.0 || f.q1 <= f.q2) {
    throw sim_error(errc::degenerate_fit,
                    "pca_whitener: needs q1 > q2 >= 0 (positive component powers)");
  }
  Whitener w;
  w.u_theta0 = f.theta0;
  w.sigma_ratio = std::sqrt((f.q1 + f.q2) / (f.q1 - f.q2));
  const Mat2 u = rotation(f.theta0);
  const Mat2 sigma{1.0, 0.0, 0.0, w.sigma_ratio};
  const Mat2 u_inv{u.a, u.c, u.b, u.d};  // rotation transpose
  w.matrix = u * sigma * u_inv;
  return w;
}

FourthMomentFit fit_fourth(const std::vector<double>& angles, const std::vector<double>& moments,
                           FourthFitMode mode, const FitTolerances& tol) {
  if (angles.size() != moments.size()) {
    throw sim_error(errc::ill_posed, "fit_fourth: angle/moment size mismatch");
  }

  FourthMomentFit f;
  double c2 = 0.0, s2 = 0.0;     // second-harmonic vector
  double phi4_base = 0.0;        // a fourth-harmonic phase candidate
  double curve[5] = {};          // coefficients for evaluating the fitted curve

  if (mode == FourthFitMode::basis5) {
    if (angles.size() < 5) {
      throw sim_error(errc::ill_posed, "fit_fourth: basis5 needs >= 5 angles");
    }
    std::vector<std::array<double, 5>> rows(angles.size());
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double a = angles[i];
      rows[i] = {1.0, std::cos(2.0 * a), std::sin(2.0 * a), std::cos(4.0 * a), std::sin(4.0 * a)};
    }
    const auto c = solve_least_squares<5>(rows, moments, tol.condition_max, "fit_fourth");
    for (int i = 0; i < 5; ++i) curve[i] = c[i];
    f.p1 = c[0];
    f.p2 = std::hypot(c[1], c[2]);
    f.p3 = std::hypot(c[3], c[4]);
    c2 = c[1];
    s2 = c[2];
    if (f.p3 <= tol.fourth_harmonic_rel * std::abs(f.p1)) {
      throw sim_error(errc::no_fourth_harmonic,
                      "fit_fourth: no fourth-harmonic power; ICA direction undetermined");
    }
    phi4_base = wrap_to(0.25 * std::atan2(c[4], c[3]), kHalfPi);
  } else {
    if (angles.size() < 4) {
      throw sim_error(errc::ill_posed, "fit_fourth: shared_phase4 needs >= 4 angles");
    }
    // Dense scan over one fourth-harmonic period, then local refinement.
    constexpr int kScan = 720;
    double best_phi = 0.0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kScan; ++i) {
      const double phi = kHalfPi * (static_cast<double>(i) / kScan);
      const double rss = solve_shared_phase(angles, moments, phi, tol.condition_max).rss;
      if (rss < best_rss) {
        best_rss = rss;
        best_phi = phi;
      }
    }
    if (!std::isfinite(best_rss)) {
      throw sim_error(errc::ill_posed, "fit_fourth: angles alias; design is rank-deficient");
    }
    const double step = kHalfPi / kScan;
    const double phi = refine_shared_phase(angles, moments, best_phi - step, best_phi + step,
                                           tol.condition_max);
    const auto sol = solve_shared_phase(angles, moments, phi, tol.condition_max);
    f.p1 = sol.p1;
    f.p2 = std::abs(sol.p2);
    f.p3 = std::abs(sol.p3);
    if (f.p3 <= tol.fourth_harmonic_rel * std::abs(f.p1)) {
      throw sim_error(errc::no_fourth_harmonic,
                      "fit_fourth: no fourth-harmonic power; ICA direction undetermined");
    }
    // Express as the unconstrained coefficients for the selection below.
    curve[0] = sol.p1;
    curve[1] = sol.p2 * std::cos(2.0 * phi);
    curve[2] = sol.p2 * std::sin(2.0 * phi);
    curve[3] = sol.p3 * std::cos(4.0 * phi);
    curve[4] = sol.p3 * std::sin(4.0 * phi);
    c2 = curve[1];
    s2 = curve[2];
    phi4_base = wrap_to(phi, kHalfPi);
  }

  // The fourth harmonic pins phi0 only up to pi/4 (its amplitude sign is
  // folded into the phase).  Two candidates land in [0, pi/2); the one
  // whose phase the second harmonic shares wins.  When the second
  // harmonic is too weak to vote, the candidate sitting at the minimum of
  // the fitted curve is taken: the sub-Gaussian direction minimizes the
  // fourth moment of whitened mixtures.
  const double cand[2] = {phi4_base, wrap_to(phi4_base + kQuarterPi, kHalfPi)};
  const double phi2 = 0.5 * std::atan2(s2, c2);
  const auto consistency = [&](double c) { return std::abs(std::cos(2.0 * (c - phi2))); };
  const auto curve_at = [&](double a) {
    return curve[0] + curve[1] * std::cos(2.0 * a) + curve[2] * std::sin(2.0 * a) +
           curve[3] * std::cos(4.0 * a) + curve[4] * std::sin(4.0 * a);
  };

  int pick;
  if (f.p2 > tol.second_harmonic_rel * std::abs(f.p1)) {
    pick = consistency(cand[0]) >= consistency(cand[1]) ? 0 : 1;
  } else {
    pick = curve_at(cand[0]) <= curve_at(cand[1]) ? 0 : 1;
  }
  f.phi0 = cand[pick];
  f.phase_consistency = consistency(cand[pick]);
  return f;
}

Mat2 ica_rotation(const FourthMomentFit& f) {
  const double c = std::cos(f.phi0), s = std::sin(f.phi0);
  // Row 1 projects the whitened pair onto the phi0 axis, row 2 onto its
  // orthogonal complement, which aligns the source axes with the outputs.
  return {c, s, -s, c};
}

Demixer compose_demixer(const Whitener& w, const Mat2& v, double y1_kurt, double y2_kurt,
                        double ambiguity_tol) {
  Demixer d;
  d.matrix = v * w.matrix;
  if (!std::isfinite(d.matrix.a) || !std::isfinite(d.matrix.b) || !std::isfinite(d.matrix.c) ||
      !std::isfinite(d.matrix.d) || d.matrix.det() == 0.0) {
    throw sim_error(errc::invalid_matrix, "compose_demixer: demixing matrix is singular");
  }
  const bool first = y1_kurt <= y2_kurt;  // sub-Gaussian channel has the lower kurtosis
  d.soi_channel = first ? 1 : 2;
  d.soi_kurtosis = first ? y1_kurt : y2_kurt;
  d.other_kurtosis = first ? y2_kurt : y1_kurt;
  d.ambiguous_channel = std::abs(std::abs(y1_kurt - 3.0) - std::abs(y2_kurt - 3.0)) < ambiguity_tol;
  return d;
}

std::pair<Waveform, Waveform> apply_demix(const Demixer& d, const Waveform& x1, const Waveform& x2) {
  validate_waveform(x1, "apply_demix");
  validate_waveform(x2, "apply_demix");
  if (x1.samples.size() != x2.samples.size() || x1.dt != x2.dt) {
    throw sim_error(errc::shape_mismatch, "apply_demix: inputs must share dt and length");
  }
  const std::size_t n = x1.samples.size();
  Waveform y1, y2;
  y1.dt = y2.dt = x1.dt;
  y1.label = "demixed_1";
  y2.label = "demixed_2";
  y1.samples.resize(n);
  y2.samples.resize(n);
  const Mat2& m = d.matrix;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = x1.samples[k], b = x2.samples[k];
    y1.samples[k] = m.a * a + m.b * b;
    y2.samples[k] = m.c * a + m.d * b;
  }
  return {std::move(y1), std::move(y2)};
}

std::vector<double> equally_spaced_angles(std::size_t n) {
  std::vector<double> a(n);
  for (std::size_t k = 0; k < n; ++k) a[k] = kPi * static_cast<double>(k) / static_cast<double>(n);
  return a;
}

namespace {

SampleStream transform_stream(const SampleStream& s1, const SampleStream& s2, double m1, double m2) {
  SampleStream out;
  out.times = s1.times;
  out.values.resize(s1.values.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    out.values[k] = m1 * s1.values[k] + m2 * s2.values[k];
  }
  return out;
}

double whiteness_of(const SampleStream& u1, const SampleStream& u2) {
  const auto n = static_cast<double>(u1.values.size());
  double m1 = 0.0, m2 = 0.0, c11 = 0.0, c22 = 0.0, c12 = 0.0;
  for (std::size_t k = 0; k < u1.values.size(); ++k) {
    m1 += u1.values[k];
    m2 += u2.values[k];
  }
  m1 /= n;
  m2 /= n;
  for (std::size_t k = 0; k < u1.values.size(); ++k) {
    const double a = u1.values[k] - m1;
    const double b = u2.values[k] - m2;
    c11 += a * a;
    c22 += b * b;
    c12 += a * b;
  }
  const double diag = 0.5 * (c11 + c22);
  return diag > 0.0 ? std::abs(c12) / diag : 0.0;
}

template <typename F>
auto staged(const char* stage, F&& fn) {
  try {
    return fn();
  } catch (const sim_error& e) {
    if (!e.stage().empty()) throw;
    throw sim_error(e.code(), stage, e.what());
  }
}

}  // namespace

SeparationResult separate(const Waveform& x1, const Waveform& x2, const PulseTrain& p,
                          const SeparationOptions& opts) {
  if (opts.theta_angles.size() < 3) {
    throw sim_error(errc::invalid_spec, "separate: need >= 3 theta angles");
  }
  const std::size_t min_phi = opts.fourth_mode == FourthFitMode::basis5 ? 5 : 4;
  if (opts.phi_angles.size() < min_phi) {
    throw sim_error(errc::invalid_spec, "separate: too few phi angles for the chosen fit mode");
  }

  SeparationResult res;

  SampleStream s1 = staged("sample", [&] { return sample(x1, p); });
  SampleStream s2 = staged("sample", [&] { return sample(x2, p); });
  res.n_pulses = s1.size();

  if (opts.detector) {
    double peak = 0.0;
    for (double v : s1.values) peak = std::max(peak, std::abs(v));
    for (double v : s2.values) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (auto& v : s1.values) v /= peak;
      for (auto& v : s2.values) v /= peak;
    }
    const auto& stage = *opts.detector;
    auto a1 = apply_detector(s1, stage.avg_power_dbm, stage.params, stage.seed,
                             stage.inverse_correction, 0);
    auto a2 = apply_detector(s2, stage.avg_power_dbm, stage.params, stage.seed,
                             stage.inverse_correction, 1);
    res.detector_clipped = a1.clipped + a2.clipped;
    s1 = std::move(a1.stream);
    s2 = std::move(a2.stream);
  }

  res.theta_moments.reserve(opts.theta_angles.size());
  for (double a : opts.theta_angles) {
    res.theta_moments.push_back(
        staged("second_moment", [&] { return second_moment(weighted_mix(s1, s2, a)); }));
  }
  res.second_fit = staged("fit_second",
                          [&] { return fit_second(opts.theta_angles, res.theta_moments, opts.tolerances); });

  const Whitener w = staged("pca_whitener", [&] { return pca_whitener(res.second_fit); });
  const SampleStream u1 = transform_stream(s1, s2, w.matrix.a, w.matrix.b);
  const SampleStream u2 = transform_stream(s1, s2, w.matrix.c, w.matrix.d);
  res.whiteness_residual = whiteness_of(u1, u2);

  res.phi_moments.reserve(opts.phi_angles.size());
  for (double a : opts.phi_angles) {
    res.phi_moments.push_back(
        staged("fourth_moment", [&] { return fourth_moment(weighted_mix(u1, u2, a)); }));
  }
  res.fourth_fit = staged("fit_fourth", [&] {
    return fit_fourth(opts.phi_angles, res.phi_moments, opts.fourth_mode, opts.tolerances);
  });

  const Mat2 v = ica_rotation(res.fourth_fit);
  const SampleStream z1 = transform_stream(u1, u2, v.a, v.b);
  const SampleStream z2 = transform_stream(u1, u2, v.c, v.d);
  res.kurtosis[0] = staged("kurtosis", [&] { return stream_kurtosis(z1); });
  res.kurtosis[1] = staged("kurtosis", [&] { return stream_kurtosis(z2); });

  res.demixer = compose_demixer(w, v, res.kurtosis[0], res.kurtosis[1],
                                opts.tolerances.kurtosis_ambiguity);
  if (res.demixer.ambiguous_channel) {
    res.warnings.push_back("kurtosis values nearly tie; SOI channel selection is ambiguous");
  }
  return res;
}

}  // namespace pulsebss
