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

#include "pulsebss/fft.hpp"

#include <cmath>

#include "pulsebss/errors.hpp"

namespace pulsebss {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) {
    throw sim_error(errc::invalid_spec, "fft: size must be a nonzero power of two");
  }

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= inv;
  }
}

std::vector<double> fir_filter_valid(std::span<const double> x, std::span<const double> h) {
  const std::size_t n = x.size();
  const std::size_t m = h.size();
  if (m == 0 || n < m) {
    throw sim_error(errc::invalid_spec, "fir_filter_valid: signal shorter than filter");
  }
  const std::size_t n_out = n - m + 1;

  // Small inputs: direct form.
  if (n_out * m <= (1u << 22)) {
    std::vector<double> y(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += h[j] * x[k + m - 1 - j];
      y[k] = acc;
    }
    return y;
  }

  // Overlap-save.
  const std::size_t block = std::max<std::size_t>(next_pow2(8 * m), 16384);
  const std::size_t step = block - (m - 1);

  std::vector<std::complex<double>> hf(block, 0.0);
  for (std::size_t j = 0; j < m; ++j) hf[j] = h[j];
  fft_inplace(hf, false);

  std::vector<double> y(n_out);
  std::vector<std::complex<double>> buf(block);
  // Full-convolution indices [m-1, n-1] map onto y[0 .. n_out-1].
  for (std::size_t start = m - 1; start < n; start += step) {
    // Block covers full-conv outputs [start, start + step); needs
    // x[start - (m-1) .. start + step - 1].
    const std::size_t x0 = start - (m - 1);
    for (std::size_t i = 0; i < block; ++i) {
      const std::size_t xi = x0 + i;
      buf[i] = (xi < n) ? x[xi] : 0.0;
    }
    fft_inplace(buf, false);
    for (std::size_t i = 0; i < block; ++i) buf[i] *= hf[i];
    fft_inplace(buf, true);
    const std::size_t count = std::min(step, n - start);
    for (std::size_t i = 0; i < count; ++i) {
      y[start - (m - 1) + i] = buf[m - 1 + i].real();
    }
  }
  return y;
}

std::vector<double> periodogram(std::span<const double> x, double dt, std::size_t segment) {
  if (segment == 0 || (segment & (segment - 1)) != 0 || x.size() < segment) {
    throw sim_error(errc::invalid_spec, "periodogram: bad segment length");
  }
  const std::size_t n_seg = x.size() / segment;
  std::vector<double> psd(segment / 2 + 1, 0.0);
  std::vector<std::complex<double>> buf(segment);
  for (std::size_t s = 0; s < n_seg; ++s) {
    for (std::size_t i = 0; i < segment; ++i) buf[i] = x[s * segment + i];
    fft_inplace(buf, false);
    for (std::size_t i = 0; i <= segment / 2; ++i) {
      psd[i] += std::norm(buf[i]);
    }
  }
  const double scale = dt / (static_cast<double>(segment) * static_cast<double>(n_seg));
  for (auto& v : psd) v *= scale;
  return psd;
}

}  // namespace pulsebss
