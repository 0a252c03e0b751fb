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

#include "eegpipe/postprocess.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "eegpipe/config.h"
#include "eegpipe/status_macros.h"

namespace eegpipe {

absl::Status PostprocessConfig::Validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    return absl::InvalidArgumentError("threshold must be in [0, 1]");
  }
  if (median_width < 1 || median_width % 2 == 0) {
    return absl::InvalidArgumentError("median_width must be odd and >= 1");
  }
  if (!(min_duration >= 0.0) || !(merge_gap >= 0.0)) {
    return absl::InvalidArgumentError(
        "min_duration and merge_gap must be >= 0");
  }
  return absl::OkStatus();
}

std::string PostprocessConfig::Canonical() const {
  return absl::StrFormat(
      "median_width=%d\nmerge_gap=%.17g\nmin_duration=%.17g\nthreshold=%.17g\n",
      median_width, merge_gap, min_duration, threshold);
}

absl::StatusOr<PostprocessConfig> PostprocessConfig::Parse(
    absl::string_view text) {
  ASSIGN_OR_RETURN(KeyValueConfig kv, KeyValueConfig::Parse(text));
  PostprocessConfig cfg;
  RETURN_IF_ERROR(kv.GetDouble("threshold", cfg.threshold));
  RETURN_IF_ERROR(kv.GetInt("median_width", cfg.median_width));
  RETURN_IF_ERROR(kv.GetDouble("min_duration", cfg.min_duration));
  RETURN_IF_ERROR(kv.GetDouble("merge_gap", cfg.merge_gap));
  RETURN_IF_ERROR(kv.CheckAllConsumed());
  RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

std::vector<double> MedianSmooth(std::span<const double> x, int width) {
  const int64_t n = static_cast<int64_t>(x.size());
  const int half = width / 2;
  std::vector<double> out(x.size());
  std::vector<double> window(width);
  for (int64_t i = 0; i < n; ++i) {
    for (int k = -half; k <= half; ++k) {
      window[k + half] = x[std::clamp<int64_t>(i + k, 0, n - 1)];
    }
    std::nth_element(window.begin(), window.begin() + half, window.end());
    out[i] = window[half];
  }
  return out;
}

std::vector<bool> PositiveEpochs(std::span<const double> posteriors,
                                 const PostprocessConfig& cfg) {
  const std::vector<double> smooth = MedianSmooth(posteriors, cfg.median_width);
  std::vector<bool> mask(smooth.size());
  for (size_t i = 0; i < smooth.size(); ++i)
    mask[i] = smooth[i] > cfg.threshold;
  return mask;
}

absl::StatusOr<EventList> ToEvents(std::span<const double> posteriors,
                                   const PostprocessConfig& cfg,
                                   double total_duration) {
  RETURN_IF_ERROR(cfg.Validate());
  if (posteriors.empty()) {
    return absl::InvalidArgumentError("no posteriors");
  }
  const double epochs = static_cast<double>(posteriors.size());
  if (total_duration < 0.0) total_duration = epochs;
  if (total_duration < epochs) {
    return absl::InvalidArgumentError(
        absl::StrCat("total duration ", total_duration, " shorter than ",
                     posteriors.size(), " epochs"));
  }
  const std::vector<bool> mask = PositiveEpochs(posteriors, cfg);

  std::vector<std::pair<double, double>> runs;
  for (size_t i = 0; i < mask.size();) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < mask.size() && mask[j]) ++j;
    runs.emplace_back(static_cast<double>(i), static_cast<double>(j));
    i = j;
  }

  std::vector<std::pair<double, double>> merged;
  for (const auto& r : runs) {
    if (!merged.empty() && r.first - merged.back().second <= cfg.merge_gap) {
      merged.back().second = r.second;
    } else {
      merged.push_back(r);
    }
  }

  std::vector<Event> events;
  for (const auto& [start, stop] : merged) {
    if (stop - start >= cfg.min_duration) {
      events.push_back({start, stop, kSeizureLabel});
    }
  }
  return EventList::Create(std::move(events), total_duration);
}

}  // namespace eegpipe
