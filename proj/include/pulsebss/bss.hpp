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

#ifndef PULSEBSS_BSS_HPP
#define PULSEBSS_BSS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pulsebss/detector.hpp"
#include "pulsebss/pulse_sampler.hpp"
#include "pulsebss/types.hpp"

namespace pulsebss {

struct Mat2 {
  // row-major [[a, b], [c, d]]
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  static Mat2 identity() { return {}; }
};

// Second-moment curve m(theta) = q1 + q2 cos(2(theta - theta0)).
// q1 +/- q2 are the principal-component powers; theta0 is the major axis.
struct SecondMomentFit {
  double q1 = 0.0;
  double q2 = 0.0;
  double theta0 = 0.0;  // radians, in [0, pi)
};

// Fourth-moment curve
//   m(phi) = p1 + p2 cos(2(phi - phi0)) + p3 cos(4(phi - phi0)),
// fitted through the unconstrained 5-coefficient harmonic basis (or the
// shared-phase 4-unknown solver).  p2, p3 are reported as harmonic
// amplitudes; phi0 lies in [0, pi/2), the natural period of the fourth
// harmonic.  phase_consistency in [0, 1] measures how well the second
// harmonic agrees with the selected phase.
struct FourthMomentFit {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double phi0 = 0.0;
  double phase_consistency = 0.0;
};

struct Whitener {
  Mat2 matrix;            // U * Sigma * U^-1
  double u_theta0 = 0.0;  // rotation angle of U
  double sigma_ratio = 1.0;  // sqrt((q1+q2)/(q1-q2)) >= 1
};

struct Demixer {
  Mat2 matrix;
  int soi_channel = 1;  // 1 or 2: output with kurtosis farthest below 3
  double soi_kurtosis = 0.0;
  double other_kurtosis = 0.0;
  bool ambiguous_channel = false;
};

// value[k] = cos(angle) x1[k] + sin(angle) x2[k]; streams must share times.
SampleStream weighted_mix(const SampleStream& x1, const SampleStream& x2, double angle);

double second_moment(const SampleStream& s);
double fourth_moment(const SampleStream& s);

struct FitTolerances {
  double condition_max = 1e8;      // pivot-ratio threshold for the LS solve
  double isotropic_rel = 0.01;     // q2/q1 below this: no anisotropy
  double fourth_harmonic_rel = 0.005;  // p3/p1 below this: no ICA direction
  double second_harmonic_rel = 0.02;  // p2/p1 below this: phase picked by curve minimum
  double kurtosis_ambiguity = 0.2;
};

SecondMomentFit fit_second(const std::vector<double>& angles, const std::vector<double>& moments,
                           const FitTolerances& tol = {});

Whitener pca_whitener(const SecondMomentFit& f);

enum class FourthFitMode { basis5, shared_phase4 };

FourthMomentFit fit_fourth(const std::vector<double>& angles, const std::vector<double>& moments,
                           FourthFitMode mode = FourthFitMode::basis5,
                           const FitTolerances& tol = {});

// The rotation that takes whitened mixtures to separated outputs: row 1
// projects onto the fitted phi0 direction, row 2 onto its orthogonal.
Mat2 ica_rotation(const FourthMomentFit& f);

Demixer compose_demixer(const Whitener& w, const Mat2& v, double y1_kurt, double y2_kurt,
                        double ambiguity_tol = 0.2);

std::pair<Waveform, Waveform> apply_demix(const Demixer& d, const Waveform& x1, const Waveform& x2);

// Optional detector stage inside separate(): streams are normalized to a
// [-1, 1] envelope and routed through the calibrated response.
struct DetectorStage {
  DetectorParams params;
  double avg_power_dbm = -20.0;
  bool inverse_correction = false;
  Seed seed;
};

struct SeparationOptions {
  std::vector<double> theta_angles;  // radians; >= 3 distinct mod pi
  std::vector<double> phi_angles;    // radians; >= 5 (basis5) or >= 4 (shared_phase4)
  FourthFitMode fourth_mode = FourthFitMode::basis5;
  FitTolerances tolerances;
  std::optional<DetectorStage> detector;
};

// n angles equally spaced over [0, pi).
std::vector<double> equally_spaced_angles(std::size_t n);

struct SeparationResult {
  Demixer demixer;
  SecondMomentFit second_fit;
  FourthMomentFit fourth_fit;
  std::vector<double> theta_moments;
  std::vector<double> phi_moments;
  double whiteness_residual = 0.0;  // |offdiag| / mean diag of whitened covariance
  std::array<double, 2> kurtosis{0.0, 0.0};
  std::size_t n_pulses = 0;
  std::size_t detector_clipped = 0;
  std::vector<std::string> warnings;
};

// Full statistics path: pulse-sample both mixtures (optionally through the
// detector), fit the second-moment curve on weighted combinations, whiten
// the sample streams, fit the fourth-moment curve on the whitened
// combinations, compose the demixer.  Fit errors propagate with stage
// labels.
SeparationResult separate(const Waveform& x1, const Waveform& x2, const PulseTrain& p,
                          const SeparationOptions& opts);

// Kurtosis E(x^4)/E(x^2)^2 of a stream (raw moments, no mean removal).
double stream_kurtosis(const SampleStream& s);

}  // namespace pulsebss

#endif  // PULSEBSS_BSS_HPP
