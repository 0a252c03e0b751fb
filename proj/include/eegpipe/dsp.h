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

#ifndef EEGPIPE_DSP_H_
#define EEGPIPE_DSP_H_

#include <complex>
#include <span>
#include <vector>

namespace eegpipe {

// In-place iterative radix-2 FFT. data.size() must be a power of two.
void Fft(std::span<std::complex<double>> data);

size_t NextPowerOfTwo(size_t n);

// Symmetric Hamming window: 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> HammingWindow(size_t n);

// |X_k|^2 for k = 0..fft_len/2 of the zero-padded input.
std::vector<double> PowerSpectrum(std::span<const double> x, size_t fft_len);

// Triangular filters with centres linearly spaced over (0, fs/2); filter k
// rises from edge k to its centre at edge k+1 and falls to edge k+2, where
// edge m sits at m * (fs/2) / (num_filters + 1).
class LinearFilterbank {
 public:
  LinearFilterbank(int num_filters, size_t fft_len, double sample_rate);

  std::vector<double> Apply(std::span<const double> power) const;
  double CenterHz(int k) const;
  int size() const { return static_cast<int>(weights_.size()); }
  // weights()[k][bin]
  const std::vector<std::vector<double>>& weights() const { return weights_; }

 private:
  double nyquist_;
  int num_filters_;
  std::vector<std::vector<double>> weights_;
};

// Orthonormal DCT-II of x, returning coefficients [first, first + count).
std::vector<double> DctII(std::span<const double> x, int first, int count);

}  // namespace eegpipe

#endif  // EEGPIPE_DSP_H_
