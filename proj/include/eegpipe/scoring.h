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

#ifndef EEGPIPE_SCORING_H_
#define EEGPIPE_SCORING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "eegpipe/events.h"
#include "eegpipe/postprocess.h"

namespace eegpipe {

inline constexpr double kSecondsPerDay = 86400.0;

// Any-overlap counts. Intervals overlap when their intersection has positive
// length; touching endpoints do not count.
struct OverlapCounts {
  int64_t tp = 0;  // reference events hit by >= 1 hypothesis
  int64_t fp = 0;  // hypothesis events hitting no reference
  int64_t ref_count = 0;
  int64_t hyp_count = 0;
};

// Linear sweep over the merged endpoint sequence.
absl::StatusOr<OverlapCounts> OvlpScore(const EventList& ref,
                                        const EventList& hyp);

absl::StatusOr<double> FaPer24h(int64_t fp, double total_duration);

struct EpochCounts {
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  // tn / (tn + fp); 1 when there are no negative epochs.
  double Specificity() const;
  double FalsePositiveRate() const { return 1.0 - Specificity(); }
};

// Epoch e covers [e, e + epoch) for e < floor(total_duration / epoch). An
// epoch is positive when the union of events covers more than
// `overlap_fraction` of it.
std::vector<bool> EpochMask(const EventList& events, double epoch = 1.0,
                            double overlap_fraction = 0.5);
std::vector<double> EpochLabels(const EventList& events, size_t epochs,
                                double overlap_fraction = 0.5);

absl::StatusOr<EpochCounts> EpochConfusion(const EventList& ref,
                                           const EventList& hyp,
                                           double epoch = 1.0);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

struct ScoreReport {
  OverlapCounts events;
  EpochCounts epochs;
  double total_duration = 0.0;
  std::vector<RocPoint> roc;

  double Sensitivity() const;  // percent; 0 when there are no references
  double Specificity() const { return 100.0 * epochs.Specificity(); }
  double FaPer24h() const;
};

struct ScoredPair {
  const EventList* ref = nullptr;
  const EventList* hyp = nullptr;
};

// Sums counts and durations over recordings in the given order.
absl::StatusOr<ScoreReport> Score(std::span<const ScoredPair> pairs);

struct RecordingPosteriors {
  std::vector<double> posteriors;
  const EventList* reference = nullptr;
};

struct OperatingPoint {
  double threshold = 0.0;
  ScoreReport report;
};

// Pooled scores after postprocessing at each threshold of a descending grid.
absl::StatusOr<std::vector<OperatingPoint>> ThresholdSweep(
    std::span<const RecordingPosteriors> recordings,
    const PostprocessConfig& base, std::span<const double> thresholds);

// ThresholdSweep reduced to tpr = OVLP sensitivity and fpr = epoch FPR.
absl::StatusOr<std::vector<RocPoint>> RocSweep(
    std::span<const RecordingPosteriors> recordings,
    const PostprocessConfig& base, std::span<const double> thresholds);

// n evenly spaced thresholds from 1 down to 0.
std::vector<double> DefaultThresholdGrid(int n = 101);

// Trapezoidal area under the points with (0,0) and (1,1) appended.
double RocArea(std::span<const RocPoint> points);

// Probability that a random positive outranks a random negative (ties 1/2).
absl::StatusOr<double> EpochAuc(std::span<const double> scores,
                                std::span<const double> labels);

}  // namespace eegpipe

#endif  // EEGPIPE_SCORING_H_
