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

#ifndef EEGPIPE_NETWORK_H_
#define EEGPIPE_NETWORK_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/features.h"

namespace eegpipe {

// How the CNN stage copes with channel grids too small for 2x2 pooling.
enum class Adaptation {
  kStrict,        // fail if any layer cannot pool
  kPreserveDims,  // skip pooling along an axis that is too small
  kDropLayers,    // remove conv layers until strict pooling succeeds
};

enum class Padding { kSame, kValid };

absl::string_view AdaptationName(Adaptation a);
absl::StatusOr<Adaptation> ParseAdaptation(absl::string_view name);

struct NetworkSpec {
  int conv_layers = 3;
  int conv_kernels = 16;
  double dropout = 0.2;
  int dense_units = 32;  // kernel-1 temporal conv acting as a dense layer
  int lstm_hidden = 32;  // per direction
  Adaptation adaptation = Adaptation::kPreserveDims;
  Padding padding = Padding::kSame;
  // Smallest channel extent allowed after pooling. 1 accepts any floor-halving
  // of an axis >= 2; 2 refuses to collapse the channel axis to a single row.
  int min_pooled_channels = 1;

  absl::Status Validate() const;
  std::string Canonical() const;
  uint64_t Hash() const;
  // key=value lines or a flat JSON object; unknown keys are rejected.
  static absl::StatusOr<NetworkSpec> Parse(absl::string_view text);
};

// Spatial dims are (channel axis, frame axis).
struct LayerShape {
  int in_h = 0, in_w = 0;
  int pad_h = 0, pad_w = 0;
  int conv_h = 0, conv_w = 0;
  int pool_h = 1, pool_w = 1;
  int out_h = 0, out_w = 0;
};

struct ShapePlan {
  int channels = 0;
  std::vector<LayerShape> layers;

  int conv_layers() const { return static_cast<int>(layers.size()); }
  int FlatSize(int kernels) const;
  // "(22,10)->(11,5)->(5,2)->(2,1)"
  std::string ToString() const;
};

absl::StatusOr<ShapePlan> ComputeShapePlan(int channels,
                                           const NetworkSpec& spec);

struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<double> values;
};

// Ordered set of named parameter tensors.
class Parameters {
 public:
  void Add(std::string name, std::vector<int> shape);

  std::vector<NamedTensor>& tensors() { return tensors_; }
  const std::vector<NamedTensor>& tensors() const { return tensors_; }
  NamedTensor& operator[](size_t i) { return tensors_[i]; }
  const NamedTensor& operator[](size_t i) const { return tensors_[i]; }
  size_t size() const { return tensors_.size(); }
  const NamedTensor* Find(absl::string_view name) const;
  NamedTensor* Find(absl::string_view name);

  size_t ParameterCount() const;
  Parameters ZerosLike() const;
  void SetZero();
  // this += other (same layout).
  void Accumulate(const Parameters& other);
  void Scale(double factor);
  bool SameLayout(const Parameters& other) const;

 private:
  std::vector<NamedTensor> tensors_;
};

// Per-feature standardisation applied to the network input.
struct InputNormalization {
  std::vector<double> mean = std::vector<double>(kFeatureDim, 0.0);
  std::vector<double> scale = std::vector<double>(kFeatureDim, 1.0);
};

struct Weights {
  Parameters params;
  Parameters adam_m;
  Parameters adam_v;
  int64_t step = 0;
  InputNormalization norm;
};

struct LossAndGradient {
  double loss = 0.0;  // mean squared error over the segment's epochs
  Parameters grad;    // d loss / d params
};

// CNN over each 1 s epoch (channels x frames grid, 26 feature planes), then
// a per-epoch dense projection, a bidirectional LSTM over the epoch sequence
// and a sigmoid output per epoch.
class Network {
 public:
  static absl::StatusOr<Network> Create(const NetworkSpec& spec, int channels);

  const NetworkSpec& spec() const { return spec_; }
  const ShapePlan& plan() const { return plan_; }
  int channels() const { return plan_.channels; }

  // Zero-valued tensors in canonical order.
  Parameters Layout() const;
  // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); LSTM forget-gate bias 1.
  Weights Initialize(uint64_t seed) const;

  // Posteriors for epochs [first, first + count) of `features`.
  absl::StatusOr<std::vector<double>> Forward(const FeatureTensor& features,
                                              size_t first, size_t count,
                                              const Weights& weights) const;

  // Mean squared error and its gradient. When `dropout_seed` is set, dropout
  // masks are drawn from it; otherwise dropout is disabled.
  absl::StatusOr<LossAndGradient> Gradient(
      const FeatureTensor& features, size_t first, size_t count,
      std::span<const double> labels, const Weights& weights,
      std::optional<uint64_t> dropout_seed = std::nullopt) const;

 private:
  struct Pass;

  Network(NetworkSpec spec, ShapePlan plan) : spec_(spec), plan_(plan) {}

  absl::Status Validate(const FeatureTensor& features, size_t first,
                        size_t count, const Weights& weights) const;
  absl::Status RunForward(const FeatureTensor& features, size_t first,
                          const Weights& weights,
                          std::optional<uint64_t> dropout_seed,
                          Pass& pass) const;

  NetworkSpec spec_;
  ShapePlan plan_;
};

// Splittable seed mixer used for per-step, per-segment random streams.
uint64_t MixSeed(uint64_t a, uint64_t b);

// Binary checkpoint: spec, channel layout, feature config hash, parameters
// (little-endian f64), Adam moments and step counter.
struct Checkpoint {
  NetworkSpec spec;
  std::vector<std::string> channel_labels;
  uint64_t feature_hash = 0;
  Weights weights;

  std::string Serialize() const;
  static absl::StatusOr<Checkpoint> Parse(absl::string_view bytes);
};

}  // namespace eegpipe

#endif  // EEGPIPE_NETWORK_H_
