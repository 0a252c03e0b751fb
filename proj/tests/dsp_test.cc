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
#include <complex>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace eegpipe {
namespace {

std::vector<std::complex<double>> DirectDft(const std::vector<double>& x,
                                            size_t n) {
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> sum = 0.0;
    for (size_t t = 0; t < x.size(); ++t) {
      sum += x[t] * std::polar(1.0, -2.0 * M_PI * k * t / n);
    }
    out[k] = sum;
  }
  return out;
}

std::vector<double> RandomVector(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  for (double& v : x) v = nd(rng);
  return x;
}

TEST(FftTest, MatchesDirectDft) {
  for (size_t n : {1u, 2u, 8u, 64u, 256u}) {
    const std::vector<double> x = RandomVector(n, n);
    std::vector<std::complex<double>> data(x.begin(), x.end());
    Fft(data);
    const auto want = DirectDft(x, n);
    for (size_t k = 0; k < n; ++k) {
      EXPECT_NEAR(std::abs(data[k] - want[k]), 0.0, 1e-9) << n << " " << k;
    }
  }
}

TEST(FftTest, NextPowerOfTwo) {
  EXPECT_EQ(NextPowerOfTwo(1), 1u);
  EXPECT_EQ(NextPowerOfTwo(50), 64u);
  EXPECT_EQ(NextPowerOfTwo(64), 64u);
  EXPECT_EQ(NextPowerOfTwo(65), 128u);
}

TEST(PowerSpectrumTest, Parseval) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::vector<double> x = RandomVector(50, seed);
    const std::vector<double> w = HammingWindow(x.size());
    double energy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      x[i] *= w[i];
      energy += x[i] * x[i];
    }
    const size_t len = NextPowerOfTwo(x.size());
    const std::vector<double> p = PowerSpectrum(x, len);
    ASSERT_EQ(p.size(), len / 2 + 1);
    double sum = p.front() + p.back();
    for (size_t k = 1; k < len / 2; ++k) sum += 2.0 * p[k];
    EXPECT_NEAR(sum / len, energy, 1e-6 * energy);
  }
}

TEST(HammingWindowTest, Values) {
  const std::vector<double> w = HammingWindow(5);
  EXPECT_NEAR(w[0], 0.08, 1e-15);
  EXPECT_NEAR(w[2], 1.0, 1e-15);
  EXPECT_NEAR(w[1], 0.54 - 0.46 * std::cos(M_PI / 2), 1e-15);
}

TEST(LinearFilterbankTest, SinusoidAtCentreWins) {
  const double fs = 1000.0;
  const size_t n = 200, len = 256;
  LinearFilterbank bank(20, len, fs);
  const std::vector<double> w = HammingWindow(n);
  for (int k = 0; k < bank.size(); ++k) {
    std::vector<double> x(n);
    for (size_t t = 0; t < n; ++t) {
      x[t] = w[t] * std::sin(2.0 * M_PI * bank.CenterHz(k) * t / fs);
    }
    // Oracle: direct DFT and triangles built from the edge definition.
    const auto dft = DirectDft(x, len);
    const double nyquist = fs / 2.0;
    int best = -1;
    double best_energy = -1.0;
    for (int m = 0; m < 20; ++m) {
      const double lo = m * nyquist / 21, mid = (m + 1) * nyquist / 21,
                   hi = (m + 2) * nyquist / 21;
      double e = 0.0;
      for (size_t b = 0; b <= len / 2; ++b) {
        const double f = b * fs / len;
        double weight = 0.0;
        if (f > lo && f <= mid) weight = (f - lo) / (mid - lo);
        if (f > mid && f < hi) weight = (hi - f) / (hi - mid);
        e += weight * std::norm(dft[b]);
      }
      if (e > best_energy) {
        best_energy = e;
        best = m;
      }
    }
    const std::vector<double> energies = bank.Apply(PowerSpectrum(x, len));
    const int got = static_cast<int>(
        std::max_element(energies.begin(), energies.end()) - energies.begin());
    EXPECT_EQ(best, k);
    EXPECT_EQ(got, best);
  }
}

TEST(DctIITest, MatchesOrthonormalDefinition) {
  const std::vector<double> x = RandomVector(20, 3);
  const std::vector<double> c = DctII(x, 0, 20);
  for (int k = 0; k < 20; ++k) {
    double sum = 0.0;
    for (int n = 0; n < 20; ++n) {
      sum += x[n] * std::cos(M_PI * k * (2 * n + 1) / 40.0);
    }
    sum *= std::sqrt((k == 0 ? 1.0 : 2.0) / 20.0);
    EXPECT_NEAR(c[k], sum, 1e-12);
  }
  const std::vector<double> tail = DctII(x, 1, 7);
  ASSERT_EQ(tail.size(), 7u);
  EXPECT_EQ(tail[0], c[1]);
  const std::vector<double> flat(20, -4.0);
  for (double v : DctII(flat, 1, 7)) EXPECT_NEAR(v, 0.0, 1e-12);
}

}  // namespace
}  // namespace eegpipe
