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

#ifndef EEGPIPE_MONTAGE_H_
#define EEGPIPE_MONTAGE_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "eegpipe/edf.h"

namespace eegpipe {

struct ElectrodePair {
  std::string anode;
  std::string cathode;

  // "ANODE-CATHODE", the channel label used throughout the pipeline.
  std::string Label() const { return anode + "-" + cathode; }
  bool operator==(const ElectrodePair&) const = default;
};

class MontageSpec {
 public:
  // Rejects empty specs, empty labels and duplicate pairs.
  static absl::StatusOr<MontageSpec> Create(std::string name,
                                            std::vector<ElectrodePair> pairs);

  const std::string& name() const { return name_; }
  const std::vector<ElectrodePair>& pairs() const { return pairs_; }
  std::vector<std::string> ChannelLabels() const;

 private:
  MontageSpec() = default;

  std::string name_;
  std::vector<ElectrodePair> pairs_;
};

// The 22-channel temporal central parasagittal montage: left temporal chain,
// right temporal chain, central transverse chain, left and right
// parasagittal chains.
MontageSpec DefaultTcpMontage();

// One "ANODE-CATHODE" pair per line; '#' starts a comment.
absl::StatusOr<MontageSpec> ParseMontage(absl::string_view text,
                                         std::string name);

// Maps upper-cased electrode names to their canonical 10-20 label.
class ElectrodeAliases {
 public:
  // T7/T8/P7/P8 to T3/T4/T5/T6.
  static ElectrodeAliases Default();
  // "ALIAS=CANONICAL" lines, '#' comments. Entries add to the defaults.
  static absl::StatusOr<ElectrodeAliases> Parse(absl::string_view text);

  void Add(absl::string_view alias, absl::string_view canonical);
  std::string Canonical(absl::string_view label) const;

 private:
  std::map<std::string, std::string> table_;
};

// Bipolar channels derived from a referential Recording.
class DifferentialRecording {
 public:
  static absl::StatusOr<DifferentialRecording> Create(
      std::vector<std::string> labels, std::vector<std::vector<double>> samples,
      double sample_rate);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& samples(size_t i) const { return samples_[i]; }
  size_t channel_count() const { return labels_.size(); }
  size_t sample_count() const {
    return samples_.empty() ? 0 : samples_.front().size();
  }
  double sample_rate() const { return sample_rate_; }
  double duration_seconds() const { return sample_count() / sample_rate_; }

 private:
  DifferentialRecording() = default;

  std::vector<std::string> labels_;
  std::vector<std::vector<double>> samples_;
  double sample_rate_ = 0.0;
};

// Channel i = anode - cathode of pair i. Electrode names are matched
// case-insensitively after alias resolution.
absl::StatusOr<DifferentialRecording> ApplyMontage(
    const Recording& recording, const MontageSpec& spec,
    const ElectrodeAliases& aliases = ElectrodeAliases::Default());

}  // namespace eegpipe

#endif  // EEGPIPE_MONTAGE_H_
