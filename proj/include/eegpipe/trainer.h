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

#ifndef EEGPIPE_TRAINER_H_
#define EEGPIPE_TRAINER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/features.h"
#include "eegpipe/network.h"

namespace eegpipe {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update; increments weights.step. Non-finite
// gradients are rejected before anything is modified.
absl::Status AdamStep(Weights& weights, const Parameters& grad,
                      const AdamHyper& hyper);

struct TrainConfig {
  int passes = 8;           // sweeps over the training segments
  int batch_segments = 1;   // segments per Adam step
  int segment_epochs = 60;  // LSTM context, in 1 s epochs
  uint64_t seed = 1;
  AdamHyper adam = {.learning_rate = 3e-3};
  int threads = 1;  // does not affect results

  absl::Status Validate() const;
  // Excludes `threads`, which has no effect on the output.
  std::string Canonical() const;
  static absl::StatusOr<TrainConfig> Parse(absl::string_view text);
};

struct LabeledFeatures {
  const FeatureTensor* features = nullptr;
  std::vector<double> labels;  // one {0,1} value per epoch
};

struct TrainResult {
  Weights weights;
  std::vector<double> step_losses;  // minibatch loss (with dropout) per step
  std::vector<double> pass_losses;  // full-set loss without dropout; [0] is
                                    // before the first update
  std::vector<std::string> warnings;
};

// Mean and inverse standard deviation of each feature over every epoch,
// frame and channel of the dataset.
InputNormalization ComputeNormalization(std::span<const LabeledFeatures> data);

// Deterministic for a given config regardless of `threads`: segment order,
// dropout masks and gradient summation order depend only on the seed.
absl::StatusOr<TrainResult> Train(const Network& net,
                                  std::span<const LabeledFeatures> data,
                                  const TrainConfig& config);

// Mean squared error over all epochs with dropout disabled.
absl::StatusOr<double> EvaluateLoss(const Network& net, const Weights& weights,
                                    std::span<const LabeledFeatures> data,
                                    int segment_epochs, int threads = 1);

// Posterior per epoch, running the LSTM over consecutive non-overlapping
// segments of `segment_epochs`.
absl::StatusOr<std::vector<double>> Infer(const Network& net,
                                          const Weights& weights,
                                          const FeatureTensor& features,
                                          int segment_epochs, int threads = 1);

}  // namespace eegpipe

#endif  // EEGPIPE_TRAINER_H_
