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

#ifndef EEGPIPE_PIPELINE_H_
#define EEGPIPE_PIPELINE_H_

#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/channel_select.h"
#include "eegpipe/edf.h"
#include "eegpipe/events.h"
#include "eegpipe/features.h"
#include "eegpipe/montage.h"
#include "eegpipe/network.h"
#include "eegpipe/postprocess.h"
#include "eegpipe/scoring.h"
#include "eegpipe/trainer.h"

namespace eegpipe {

inline constexpr char kEdfExtension[] = ".edf";
inline constexpr char kAnnotationExtension[] = ".csv";
inline constexpr char kFeatureExtension[] = ".feat";
inline constexpr char kPosteriorExtension[] = ".post.csv";
inline constexpr char kManifestName[] = "manifest.json";

// File stems in `dir` carrying `extension`, sorted. Posterior files are not
// reported as annotations.
absl::StatusOr<std::vector<std::string>> ListStems(const std::string& dir,
                                                   absl::string_view extension);

std::string JoinPath(absl::string_view dir, absl::string_view name);
absl::Status EnsureDirectory(const std::string& dir);

// Annotation CSV preceded by a "# duration_seconds=" line.
std::string AnnotationFileText(const EventList& events);
// Uses the duration line when present, else `fallback_duration` (which must
// then be positive).
absl::StatusOr<EventList> ReadAnnotationFile(const std::string& path,
                                             double fallback_duration = -1.0);

std::string PosteriorFileText(std::span<const double> posteriors,
                              double duration_seconds);
absl::StatusOr<std::pair<std::vector<double>, double>> ParsePosteriorFile(
    absl::string_view text);

absl::StatusOr<Recording> ReadEdfRecording(const std::string& path);
absl::Status WriteEdfRecording(const std::string& path, const Recording& rec);

// Montage, preset selection and feature extraction for one recording.
absl::StatusOr<FeatureTensor> RecordingFeatures(const Recording& rec,
                                                const MontageSpec& montage,
                                                const ElectrodeAliases& aliases,
                                                const ChannelConfig& preset,
                                                const FeatureConfig& cfg,
                                                int threads);

// Writes `entries` (already JSON-encoded values) as a JSON object at `path`.
absl::Status WriteManifest(
    const std::string& path, absl::string_view command,
    const std::vector<std::pair<std::string, std::string>>& entries);

struct LabeledRecording {
  std::string name;
  Recording recording;
  EventList events;
};

struct ExperimentConfig {
  FeatureConfig features;
  NetworkSpec network;
  TrainConfig train;
  PostprocessConfig postprocess;
  std::vector<double> thresholds = DefaultThresholdGrid(101);
  int threads = 1;
};

struct ExperimentResult {
  std::string preset;
  int channels = 0;
  int conv_layers = 0;
  std::string shape_plan;
  std::vector<double> pass_losses;
  double epoch_auc = 0.0;
  double roc_area = 0.0;
  ScoreReport report;  // at postprocess.threshold, with the ROC attached
  std::vector<OperatingPoint> sweep;
  Checkpoint checkpoint;
};

// Trains on `train` and evaluates on `test` for one channel preset.
absl::StatusOr<ExperimentResult> RunExperiment(
    std::span<const LabeledRecording> train,
    std::span<const LabeledRecording> test, const ChannelConfig& preset,
    const ExperimentConfig& cfg);

// Table with columns channels, conv layers, sensitivity, specificity and
// FA/24h; one row per result.
std::string SummaryTable(std::span<const ExperimentResult> results);

}  // namespace eegpipe

#endif  // EEGPIPE_PIPELINE_H_
