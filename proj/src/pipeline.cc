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

#include "eegpipe/pipeline.h"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "eegpipe/binary_io.h"
#include "eegpipe/status_macros.h"
#include "json.hpp"

namespace eegpipe {

namespace {

constexpr char kDurationPrefix[] = "# duration_seconds=";

std::string Shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

absl::StatusOr<double> DurationLine(absl::string_view text) {
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (absl::ConsumePrefix(&line, kDurationPrefix)) {
      double v = 0.0;
      if (!absl::SimpleAtod(line, &v) || !(v > 0.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad duration line '", line, "'"));
      }
      return v;
    }
    if (!line.empty() && line[0] != '#') break;
  }
  return -1.0;
}

}  // namespace

std::string JoinPath(absl::string_view dir, absl::string_view name) {
  return (std::filesystem::path(std::string(dir)) / std::string(name)).string();
}

absl::Status EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create directory ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::string>> ListStems(
    const std::string& dir, absl::string_view extension) {
  std::error_code ec;
  std::filesystem::directory_iterator it(dir, ec);
  if (ec) {
    return absl::NotFoundError(
        absl::StrCat("cannot list directory ", dir, ": ", ec.message()));
  }
  std::vector<std::string> stems;
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!absl::EndsWith(name, extension)) continue;
    if (extension == kAnnotationExtension &&
        absl::EndsWith(name, kPosteriorExtension)) {
      continue;
    }
    stems.push_back(name.substr(0, name.size() - extension.size()));
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

std::string AnnotationFileText(const EventList& events) {
  return absl::StrCat(kDurationPrefix, Shortest(events.total_duration()), "\n",
                      FormatAnnotations(events));
}

absl::StatusOr<EventList> ReadAnnotationFile(const std::string& path,
                                             double fallback_duration) {
  ASSIGN_OR_RETURN(std::string text, ReadFileToString(path));
  ASSIGN_OR_RETURN(double duration, DurationLine(text));
  if (duration <= 0.0) duration = fallback_duration;
  if (!(duration > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": no duration line and no recording duration"));
  }
  auto events = ReadAnnotations(text, duration);
  if (!events.ok()) {
    return absl::Status(events.status().code(),
                        absl::StrCat(path, ": ", events.status().message()));
  }
  return events;
}

std::string PosteriorFileText(std::span<const double> posteriors,
                              double duration_seconds) {
  std::string out =
      absl::StrCat(kDurationPrefix, Shortest(duration_seconds), "\n");
  absl::StrAppend(&out, "epoch,posterior\n");
  for (size_t i = 0; i < posteriors.size(); ++i) {
    absl::StrAppend(&out, i, ",", Shortest(posteriors[i]), "\n");
  }
  return out;
}

absl::StatusOr<std::pair<std::vector<double>, double>> ParsePosteriorFile(
    absl::string_view text) {
  ASSIGN_OR_RETURN(double duration, DurationLine(text));
  std::vector<double> posteriors;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line[0] == '#' || line == "epoch,posterior") continue;
    std::vector<absl::string_view> cols = absl::StrSplit(line, ',');
    size_t epoch = 0;
    double p = 0.0;
    if (cols.size() != 2 || !absl::SimpleAtoi(cols[0], &epoch) ||
        !absl::SimpleAtod(cols[1], &p) || epoch != posteriors.size() ||
        !(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed posterior line ", line_no));
    }
    posteriors.push_back(p);
  }
  if (posteriors.empty()) return absl::InvalidArgumentError("no posteriors");
  if (duration <= 0.0) duration = static_cast<double>(posteriors.size());
  return std::make_pair(std::move(posteriors), duration);
}

absl::StatusOr<Recording> ReadEdfRecording(const std::string& path) {
  ASSIGN_OR_RETURN(std::string bytes, ReadFileToString(path));
  auto edf = ParseEdf(bytes);
  if (!edf.ok()) {
    return absl::Status(edf.status().code(),
                        absl::StrCat(path, ": ", edf.status().message()));
  }
  return edf->ToRecording();
}

absl::Status WriteEdfRecording(const std::string& path, const Recording& rec) {
  ASSIGN_OR_RETURN(EdfHeader header, DefaultHeaderFor(rec));
  ASSIGN_OR_RETURN(std::string bytes, WriteEdf(rec, header));
  return WriteStringToFile(path, bytes);
}

absl::StatusOr<FeatureTensor> RecordingFeatures(const Recording& rec,
                                                const MontageSpec& montage,
                                                const ElectrodeAliases& aliases,
                                                const ChannelConfig& preset,
                                                const FeatureConfig& cfg,
                                                int threads) {
  ASSIGN_OR_RETURN(DifferentialRecording diff,
                   ApplyMontage(rec, montage, aliases));
  ASSIGN_OR_RETURN(DifferentialRecording selected, Select(diff, preset));
  return ExtractFeatures(selected, cfg, threads);
}

absl::Status WriteManifest(
    const std::string& path, absl::string_view command,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  nlohmann::ordered_json j;
  j["command"] = std::string(command);
  for (const auto& [key, value] : entries) {
    j[key] = nlohmann::ordered_json::parse(value);
  }
  return WriteStringToFile(path, j.dump(2) + "\n");
}

absl::StatusOr<ExperimentResult> RunExperiment(
    std::span<const LabeledRecording> train,
    std::span<const LabeledRecording> test, const ChannelConfig& preset,
    const ExperimentConfig& cfg) {
  const MontageSpec montage = DefaultTcpMontage();
  const ElectrodeAliases aliases = ElectrodeAliases::Default();
  const auto features_of = [&](std::span<const LabeledRecording> set)
      -> absl::StatusOr<std::vector<FeatureTensor>> {
    std::vector<FeatureTensor> out;
    for (const LabeledRecording& r : set) {
      ASSIGN_OR_RETURN(FeatureTensor t,
                       RecordingFeatures(r.recording, montage, aliases, preset,
                                         cfg.features, cfg.threads));
      out.push_back(std::move(t));
    }
    return out;
  };
  ASSIGN_OR_RETURN(std::vector<FeatureTensor> train_features,
                   features_of(train));
  ASSIGN_OR_RETURN(std::vector<FeatureTensor> test_features, features_of(test));

  ASSIGN_OR_RETURN(
      Network net,
      Network::Create(cfg.network, static_cast<int>(preset.size())));
  std::vector<LabeledFeatures> data;
  for (size_t i = 0; i < train.size(); ++i) {
    data.push_back({&train_features[i],
                    EpochLabels(train[i].events, train_features[i].epochs())});
  }
  TrainConfig train_cfg = cfg.train;
  train_cfg.threads = cfg.threads;
  ASSIGN_OR_RETURN(TrainResult trained, Train(net, data, train_cfg));

  ExperimentResult result;
  result.preset = preset.name;
  result.channels = static_cast<int>(preset.size());
  result.conv_layers = net.plan().conv_layers();
  result.shape_plan = net.plan().ToString();
  result.pass_losses = trained.pass_losses;

  std::vector<double> all_scores, all_labels;
  std::vector<RecordingPosteriors> posteriors;
  for (size_t i = 0; i < test.size(); ++i) {
    ASSIGN_OR_RETURN(std::vector<double> p,
                     Infer(net, trained.weights, test_features[i],
                           cfg.train.segment_epochs, cfg.threads));
    const std::vector<double> labels =
        EpochLabels(test[i].events, test_features[i].epochs());
    all_scores.insert(all_scores.end(), p.begin(), p.end());
    all_labels.insert(all_labels.end(), labels.begin(), labels.end());
    posteriors.push_back({std::move(p), &test[i].events});
  }
  ASSIGN_OR_RETURN(result.epoch_auc, EpochAuc(all_scores, all_labels));
  ASSIGN_OR_RETURN(result.sweep,
                   ThresholdSweep(posteriors, cfg.postprocess, cfg.thresholds));
  std::vector<RocPoint> roc;
  for (const OperatingPoint& p : result.sweep) {
    roc.push_back({p.threshold, p.report.epochs.FalsePositiveRate(),
                   p.report.Sensitivity() / 100.0});
  }
  result.roc_area = RocArea(roc);
  const double theta = cfg.postprocess.threshold;
  ASSIGN_OR_RETURN(std::vector<OperatingPoint> at_theta,
                   ThresholdSweep(posteriors, cfg.postprocess,
                                  std::span<const double>(&theta, 1)));
  result.report = at_theta.front().report;
  result.report.roc = std::move(roc);

  result.checkpoint.spec = cfg.network;
  result.checkpoint.channel_labels = preset.members;
  result.checkpoint.feature_hash = cfg.features.Hash();
  result.checkpoint.weights = std::move(trained.weights);
  return result;
}

std::string SummaryTable(std::span<const ExperimentResult> results) {
  std::string out = absl::StrFormat("%-10s %8s %12s %12s %12s %10s\n", "preset",
                                    "channels", "conv_layers", "sensitivity",
                                    "specificity", "fa_per_24h");
  for (const ExperimentResult& r : results) {
    absl::StrAppendFormat(&out, "%-10s %8d %12d %12.2f %12.2f %10.2f\n",
                          r.preset, r.channels, r.conv_layers,
                          r.report.Sensitivity(), r.report.Specificity(),
                          r.report.FaPer24h());
  }
  return out;
}

}  // namespace eegpipe
