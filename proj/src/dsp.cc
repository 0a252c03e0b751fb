// Copyright 2026 The eegpipe Authors.
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

#include "eegpipe/dsp.h"

#include <cmath>
#include <numbers>
#include <utility>

namespace eegpipe {

void Fft(std::span<std::complex<double>> data) {
  const size_t n = data.size();
  if (n < 2) return;
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (size_t start = 0; start < n; start += len) {
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, angle * k);
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + len / 2] * w;
        data[start + k] = u + v;
        data[start + k + len / 2] = u - v;
      }
    }
  }
}

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> HammingWindow(size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
  }
  return w;
}

std::vector<double> PowerSpectrum(std::span<const double> x, size_t fft_len) {
  std::vector<std::complex<double>> buf(fft_len);
  for (size_t i = 0; i < x.size() && i < fft_len; ++i) buf[i] = x[i];
  Fft(buf);
  std::vector<double> power(fft_len / 2 + 1);
  for (size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
  return power;
}

LinearFilterbank::LinearFilterbank(int num_filters, size_t fft_len,
                                   double sample_rate)
    : nyquist_(sample_rate / 2.0), num_filters_(num_filters) {
  const size_t bins = fft_len / 2 + 1;
  const double spacing = nyquist_ / (num_filters + 1);
  weights_.assign(num_filters, std::vector<double>(bins, 0.0));
  for (int k = 0; k < num_filters; ++k) {
    const double left = k * spacing;
    const double center = (k + 1) * spacing;
    const double right = (k + 2) * spacing;
    for (size_t b = 0; b < bins; ++b) {
      const double f = b * sample_rate / fft_len;
      if (f > left && f <= center) {
        weights_[k][b] = (f - left) / (center - left);
      } else if (f > center && f < right) {
        weights_[k][b] = (right - f) / (right - center);
      }
    }
  }
}

std::vector<double> LinearFilterbank::Apply(
    std::span<const double> power) const {
  std::vector<double> out(weights_.size(), 0.0);
  for (size_t k = 0; k < weights_.size(); ++k) {
    double acc = 0.0;
    for (size_t b = 0; b < power.size(); ++b) acc += weights_[k][b] * power[b];
    out[k] = acc;
  }
  return out;
}

double LinearFilterbank::CenterHz(int k) const {
  return (k + 1) * nyquist_ / (num_filters_ + 1);
}

std::vector<double> DctII(std::span<const double> x, int first, int count) {
  const size_t n = x.size();
  std::vector<double> out(count, 0.0);
  for (int j = 0; j < count; ++j) {
    const int q = first + j;
    const double scale = q == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * q * (i + 0.5) / n);
    }
    out[j] = scale * acc;
  }
  return out;
}

}  // namespace eegpipe
