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

#ifndef EEGPIPE_POSTPROCESS_H_
#define EEGPIPE_POSTPROCESS_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/events.h"

namespace eegpipe {

struct PostprocessConfig {
  double threshold = 0.5;     // epoch is positive when posterior > threshold
  int median_width = 3;       // epochs, odd; 1 disables smoothing
  double min_duration = 3.0;  // seconds
  double merge_gap = 1.0;     // seconds

  absl::Status Validate() const;
  std::string Canonical() const;
  static absl::StatusOr<PostprocessConfig> Parse(absl::string_view text);
};

// Running median with edge replication.
std::vector<double> MedianSmooth(std::span<const double> x, int width);

// Smoothed and thresholded epochs, before merging and duration filtering.
std::vector<bool> PositiveEpochs(std::span<const double> posteriors,
                                 const PostprocessConfig& cfg);

// median smooth -> threshold -> merge runs separated by <= merge_gap ->
// drop runs shorter than min_duration. Epoch i spans [i, i + 1) seconds.
// `total_duration` defaults to the number of epochs.
absl::StatusOr<EventList> ToEvents(std::span<const double> posteriors,
                                   const PostprocessConfig& cfg,
                                   double total_duration = -1.0);

}  // namespace eegpipe

#endif  // EEGPIPE_POSTPROCESS_H_
