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

#ifndef EEGPIPE_FEATURES_H_
#define EEGPIPE_FEATURES_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/montage.h"

namespace eegpipe {

inline constexpr int kBaseFeatureCount = 9;
inline constexpr int kFeatureDim = 26;
inline constexpr int kFramesPerEpoch = 10;

// Which second-derivative term is dropped to reach 26 dimensions.
enum class FeatureComposition {
  kDropDeltaDeltaDifferentialEnergy,
  kDropDeltaDeltaLogEnergy,
};

struct FeatureConfig {
  double frame_duration = 0.1;   // seconds
  double window_duration = 0.2;  // seconds
  int cepstral_count = 7;
  int filterbank_size = 20;
  double fft_floor = 1e-10;
  int delta_window = 9;  // frames, odd
  double subframe_duration = 0.01;
  FeatureComposition composition =
      FeatureComposition::kDropDeltaDeltaDifferentialEnergy;

  absl::Status Validate() const;
  // Canonical "key=value" text; the config hash is FNV-1a over it.
  std::string Canonical() const;
  uint64_t Hash() const;
  // key=value lines or a flat JSON object; composition is
  // "drop_delta_delta_differential_energy" or "drop_delta_delta_log_energy".
  static absl::StatusOr<FeatureConfig> Parse(absl::string_view text);
};

// Sample geometry of the framing at a given rate.
struct FrameGeometry {
  double step = 0.0;      // samples between frame starts (may be fractional)
  size_t window_len = 0;  // samples per analysis window
  double lead = 0.0;      // samples the window extends before its frame
  size_t fft_len = 0;
  size_t subframe_len = 0;

  static absl::StatusOr<FrameGeometry> For(double sample_rate,
                                           const FeatureConfig& cfg);
  size_t FrameCount(size_t samples) const;
  int64_t WindowStart(size_t frame) const;
};

// Window t spans [t*frame - (window - frame)/2, t*frame + (window + frame)/2)
// seconds, zero padded outside the signal.
absl::StatusOr<std::vector<std::vector<double>>> FrameSignal(
    std::span<const double> samples, double sample_rate,
    const FeatureConfig& cfg);

// [log energy, c1..c7, differential energy].
using BaseFeatures = std::array<double, kBaseFeatureCount>;

// Log filterbank energies of one window: Hamming, |DFT|^2, triangular
// linear filterbank, natural log floored at fft_floor.
absl::StatusOr<std::vector<double>> FilterbankLogEnergies(
    std::span<const double> window, double sample_rate,
    const FeatureConfig& cfg);

absl::StatusOr<BaseFeatures> LfccFrame(std::span<const double> window,
                                       double sample_rate,
                                       const FeatureConfig& cfg);

// Regression deltas with edge replication over `delta_window` frames.
std::vector<std::vector<double>> Deltas(
    const std::vector<std::vector<double>>& seq, const FeatureConfig& cfg);

// 9 base + 9 first derivatives + 8 second derivatives.
absl::StatusOr<std::array<double, kFeatureDim>> Assemble(
    std::span<const double> base, std::span<const double> d1,
    std::span<const double> d2,
    FeatureComposition composition =
        FeatureComposition::kDropDeltaDeltaDifferentialEnergy);

// Per-frame 26-dim features of one channel.
absl::StatusOr<std::vector<std::array<double, kFeatureDim>>> ChannelFeatures(
    std::span<const double> samples, double sample_rate,
    const FeatureConfig& cfg);

// values[epoch][frame][channel][26], stored as 32-bit floats.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  FeatureTensor(size_t epochs, std::vector<std::string> channel_labels,
                double duration_seconds, uint64_t config_hash);

  size_t epochs() const { return epochs_; }
  size_t channels() const { return labels_.size(); }
  const std::vector<std::string>& channel_labels() const { return labels_; }
  double duration_seconds() const { return duration_seconds_; }
  uint64_t config_hash() const { return config_hash_; }

  float at(size_t epoch, size_t frame, size_t channel, size_t k) const {
    return values_[Index(epoch, frame, channel, k)];
  }
  float& at(size_t epoch, size_t frame, size_t channel, size_t k) {
    return values_[Index(epoch, frame, channel, k)];
  }
  std::span<const float> values() const { return values_; }

  std::string Serialize() const;
  static absl::StatusOr<FeatureTensor> Parse(absl::string_view bytes);
  std::string ToCsv() const;

 private:
  size_t Index(size_t e, size_t f, size_t c, size_t k) const {
    return ((e * kFramesPerEpoch + f) * labels_.size() + c) * kFeatureDim + k;
  }

  size_t epochs_ = 0;
  std::vector<std::string> labels_;
  double duration_seconds_ = 0.0;
  uint64_t config_hash_ = 0;
  std::vector<float> values_;
};

// Channels are processed independently, so the result does not depend on
// `threads`.
absl::StatusOr<FeatureTensor> ExtractFeatures(const DifferentialRecording& rec,
                                              const FeatureConfig& cfg,
                                              int threads = 1);

}  // namespace eegpipe

#endif  // EEGPIPE_FEATURES_H_
