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

#include "eegpipe/montage.h"

#include <set>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace eegpipe {

namespace {

absl::string_view StripComment(absl::string_view line) {
  if (size_t hash = line.find('#'); hash != absl::string_view::npos) {
    line = line.substr(0, hash);
  }
  return absl::StripAsciiWhitespace(line);
}

}  // namespace

absl::StatusOr<MontageSpec> MontageSpec::Create(
    std::string name, std::vector<ElectrodePair> pairs) {
  if (pairs.empty()) {
    return absl::InvalidArgumentError("montage has no pairs");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& p : pairs) {
    p.anode = absl::AsciiStrToUpper(p.anode);
    p.cathode = absl::AsciiStrToUpper(p.cathode);
    if (p.anode.empty() || p.cathode.empty()) {
      return absl::InvalidArgumentError("montage pair with empty electrode");
    }
    if (!seen.emplace(p.anode, p.cathode).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate montage pair ", p.Label()));
    }
  }
  MontageSpec spec;
  spec.name_ = std::move(name);
  spec.pairs_ = std::move(pairs);
  return spec;
}

std::vector<std::string> MontageSpec::ChannelLabels() const {
  std::vector<std::string> out;
  out.reserve(pairs_.size());
  for (const auto& p : pairs_) out.push_back(p.Label());
  return out;
}

MontageSpec DefaultTcpMontage() {
  static const std::vector<ElectrodePair> kPairs = {
      {"FP1", "F7"}, {"F7", "T3"}, {"T3", "T5"}, {"T5", "O1"},  {"FP2", "F8"},
      {"F8", "T4"},  {"T4", "T6"}, {"T6", "O2"}, {"A1", "T3"},  {"T3", "C3"},
      {"C3", "CZ"},  {"CZ", "C4"}, {"C4", "T4"}, {"T4", "A2"},  {"FP1", "F3"},
      {"F3", "C3"},  {"C3", "P3"}, {"P3", "O1"}, {"FP2", "F4"}, {"F4", "C4"},
      {"C4", "P4"},  {"P4", "O2"},
  };
  return *MontageSpec::Create("tcp", kPairs);
}

absl::StatusOr<MontageSpec> ParseMontage(absl::string_view text,
                                         std::string name) {
  std::vector<ElectrodePair> pairs;
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = StripComment(raw);
    if (line.empty()) continue;
    std::vector<absl::string_view> parts = absl::StrSplit(line, '-');
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("montage line ", line_no,
                       ": expected ANODE-CATHODE, got '", line, "'"));
    }
    pairs.push_back({std::string(absl::StripAsciiWhitespace(parts[0])),
                     std::string(absl::StripAsciiWhitespace(parts[1]))});
  }
  return MontageSpec::Create(std::move(name), std::move(pairs));
}

ElectrodeAliases ElectrodeAliases::Default() {
  ElectrodeAliases a;
  a.Add("T7", "T3");
  a.Add("T8", "T4");
  a.Add("P7", "T5");
  a.Add("P8", "T6");
  return a;
}

absl::StatusOr<ElectrodeAliases> ElectrodeAliases::Parse(
    absl::string_view text) {
  ElectrodeAliases a = Default();
  int line_no = 0;
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    absl::string_view line = StripComment(raw);
    if (line.empty()) continue;
    std::vector<absl::string_view> parts = absl::StrSplit(line, '=');
    if (parts.size() != 2 || absl::StripAsciiWhitespace(parts[0]).empty() ||
        absl::StripAsciiWhitespace(parts[1]).empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("alias line ", line_no, ": expected ALIAS=CANONICAL"));
    }
    a.Add(absl::StripAsciiWhitespace(parts[0]),
          absl::StripAsciiWhitespace(parts[1]));
  }
  return a;
}

void ElectrodeAliases::Add(absl::string_view alias,
                           absl::string_view canonical) {
  table_[absl::AsciiStrToUpper(alias)] = absl::AsciiStrToUpper(canonical);
}

std::string ElectrodeAliases::Canonical(absl::string_view label) const {
  std::string key = absl::AsciiStrToUpper(absl::StripAsciiWhitespace(label));
  auto it = table_.find(key);
  return it == table_.end() ? key : it->second;
}

absl::StatusOr<DifferentialRecording> DifferentialRecording::Create(
    std::vector<std::string> labels, std::vector<std::vector<double>> samples,
    double sample_rate) {
  if (labels.empty() || labels.size() != samples.size()) {
    return absl::InvalidArgumentError("channel labels and samples mismatch");
  }
  if (!(sample_rate > 0.0)) {
    return absl::InvalidArgumentError("sample rate must be positive");
  }
  for (const auto& s : samples) {
    if (s.size() != samples.front().size()) {
      return absl::InvalidArgumentError("length mismatch between channels");
    }
  }
  DifferentialRecording r;
  r.labels_ = std::move(labels);
  r.samples_ = std::move(samples);
  r.sample_rate_ = sample_rate;
  return r;
}

absl::StatusOr<DifferentialRecording> ApplyMontage(
    const Recording& recording, const MontageSpec& spec,
    const ElectrodeAliases& aliases) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < recording.electrode_count(); ++i) {
    index.emplace(aliases.Canonical(recording.labels()[i]), i);
  }
  auto find = [&](const std::string& electrode) -> absl::StatusOr<size_t> {
    auto it = index.find(aliases.Canonical(electrode));
    if (it == index.end()) {
      return absl::NotFoundError(absl::StrCat("missing electrode ", electrode));
    }
    return it->second;
  };

  std::vector<std::string> labels;
  std::vector<std::vector<double>> samples;
  for (const ElectrodePair& pair : spec.pairs()) {
    auto anode = find(pair.anode);
    if (!anode.ok()) return anode.status();
    auto cathode = find(pair.cathode);
    if (!cathode.ok()) return cathode.status();
    const auto& a = recording.samples(*anode);
    const auto& c = recording.samples(*cathode);
    if (a.size() != c.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("length mismatch in ", pair.Label()));
    }
    std::vector<double> diff(a.size());
    for (size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - c[k];
    labels.push_back(pair.Label());
    samples.push_back(std::move(diff));
  }
  return DifferentialRecording::Create(std::move(labels), std::move(samples),
                                       recording.sample_rate());
}

}  // namespace eegpipe
